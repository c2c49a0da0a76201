#include <doctest.h>

#include "cisar/fft.hpp"
#include "support/oracles.hpp"

using namespace cisar;

TEST_CASE("radix-2 fft matches the naive DFT") {
    test::TestRng rng(3);
    for (size_t n : {1u, 2u, 8u, 64u, 256u}) {
        std::vector<Complex> x(n);
        for (Complex& v : x) v = rng.complex_gaussian();
        std::vector<Complex> got = x;
        fft::forward(got);
        const std::vector<Complex> expected = test::naive_dft(x, false);
        for (size_t i = 0; i < n; ++i) CHECK(std::abs(got[i] - expected[i]) < 1e-10);
    }
}

TEST_CASE("inverse undoes forward") {
    test::TestRng rng(5);
    std::vector<Complex> x(128);
    for (Complex& v : x) v = rng.complex_gaussian();
    std::vector<Complex> y = x;
    fft::forward(y);
    fft::inverse(y);
    for (size_t i = 0; i < x.size(); ++i) CHECK(std::abs(x[i] - y[i]) < 1e-12);
}

TEST_CASE("non power-of-two lengths are rejected") {
    std::vector<Complex> x(12);
    CHECK_THROWS_AS(fft::forward(x), InvalidArgument);
    CHECK(fft::next_pow2(12) == 16);
    CHECK(fft::next_pow2(16) == 16);
    CHECK(fft::is_pow2(1));
    CHECK_FALSE(fft::is_pow2(0));
    CHECK_FALSE(fft::is_pow2(24));
}
