#include <doctest.h>

#include <cmath>

#include "cisar/imaging.hpp"
#include "cisar/scene.hpp"
#include "cisar/signal.hpp"
#include "support/oracles.hpp"

using namespace cisar;

TEST_CASE("rd_image and reconstruct_data are mutually inverse") {
    test::TestRng rng(301);
    for (const auto& [rows, cols] : std::vector<std::pair<int, int>>{{8, 8}, {16, 33}, {256, 256}}) {
        const CMat image = rng.complex_matrix(rows, cols);
        const CMat back = rd_image(reconstruct_data(image));
        CHECK((back - image).cwiseAbs().maxCoeff() < 1e-10);
        const CMat s = rng.complex_matrix(rows, cols);
        CHECK((reconstruct_data(rd_image(s)) - s).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("rd_image preserves the Frobenius norm and maps zero to zero") {
    test::TestRng rng(307);
    const CMat s = rng.complex_matrix(24, 40);
    CHECK(rd_image(s).norm() == doctest::Approx(s.norm()).epsilon(1e-12));
    CHECK(rd_image(CMat::Zero(5, 9)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("a center scatterer focuses into a single dominant cell") {
    ScattererScene scene;
    scene.scatterers = {{0.0, 0.0, Complex(1.0, 0.0)}};
    scene.rotation_span_deg = 3.2;
    scene.angle_step_deg = 0.1;
    scene.center_frequency_hz = 10e9;
    scene.bandwidth_hz = 1e9;
    scene.frequency_step_hz = 1e9 / 31.0;  // 32 bins
    const CVec waveform = chirp_reference(256, 1.0);
    const DataMatrix data =
        simulate_dwell(scene, waveform, {}, std::numeric_limits<double>::infinity(), std::nullopt);
    const CMat image = rd_image(data.values);

    Eigen::Index pr, pc;
    const double peak = image.cwiseAbs().maxCoeff(&pr, &pc);
    CHECK(pr == 0);  // DC Doppler cell
    CHECK(pc == 0);  // zero-range cell
    double next = 0.0;
    for (Eigen::Index r = 0; r < image.rows(); ++r)
        for (Eigen::Index c = 0; c < image.cols(); ++c)
            if (!(r == pr && c == pc)) next = std::max(next, std::abs(image(r, c)));
    CHECK(20.0 * std::log10(peak / next) >= 13.0);
}

TEST_CASE("image contrast") {
    test::TestRng rng(311);

    SUBCASE("constant magnitude yields zero") {
        CMat image(3, 4);
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 4; ++c) image(r, c) = std::polar(2.5, rng.uniform());
        // polar magnitudes round in the last ulp, so allow the usual 1e-12
        CHECK(image_contrast(image) <= 1e-12);
        CHECK(image_contrast(CMat::Constant(3, 4, Complex(2.5, 0.0))) == 0.0);
    }
    SUBCASE("hand-computed 2x2 case") {
        CMat image = CMat::Zero(2, 2);
        image(0, 0) = 1.0;
        CHECK(image_contrast(image) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
    }
    SUBCASE("scale invariance") {
        const CMat image = rng.complex_matrix(6, 6);
        CHECK(image_contrast(image) ==
              doctest::Approx(image_contrast((7.3 * image).eval())).epsilon(1e-12));
    }
    SUBCASE("zero image is rejected") {
        CHECK_THROWS_AS(image_contrast(CMat::Zero(3, 3)), InvalidArgument);
    }
}

TEST_CASE("coherence") {
    test::TestRng rng(313);
    const CMat image = rng.complex_matrix(8, 8);

    SUBCASE("self coherence is 1 and phase rotations do not matter") {
        CHECK(std::abs(coherence(image, image) - 1.0) < 1e-12);
        const CMat rotated = std::polar(1.0, 0.77) * image;
        CHECK(std::abs(coherence(rotated, image) - 1.0) < 1e-12);
    }
    SUBCASE("disjoint supports are orthogonal") {
        CMat a = CMat::Zero(4, 4), b = CMat::Zero(4, 4);
        a(0, 0) = 1.0;
        b(3, 3) = 1.0;
        CHECK(coherence(a, b) == 0.0);
    }
    SUBCASE("argument order does not matter") {
        const CMat other = rng.complex_matrix(8, 8);
        CHECK(coherence(image, other) == doctest::Approx(coherence(other, image)).epsilon(1e-12));
    }
    SUBCASE("shape and zero-norm errors") {
        CHECK_THROWS_AS(coherence(image, CMat::Zero(4, 4)), DimensionMismatch);
        CHECK_THROWS_AS(coherence(image, CMat::Zero(8, 8)), InvalidArgument);
    }
}

TEST_CASE("nmse") {
    test::TestRng rng(317);
    const CMat reference = rng.complex_matrix(6, 9);
    CHECK(nmse(reference, reference) == 0.0);
    CHECK(nmse(CMat::Zero(6, 9), reference) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(nmse((2.0 * reference).eval(), reference) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(nmse(reference, CMat::Zero(6, 9)), InvalidArgument);

    SUBCASE("triangle sanity") {
        for (int trial = 0; trial < 10; ++trial) {
            const CMat a = rng.complex_matrix(5, 5);
            const CMat b = rng.complex_matrix(5, 5);
            const CMat c = rng.complex_matrix(5, 5);
            CHECK(nmse(a, c) <= ((a - b).norm() + (b - c).norm()) / c.norm() + 1e-12);
        }
    }
}

TEST_CASE("magnitude-domain metrics ignore phase structure") {
    test::TestRng rng(331);
    const CMat image = rng.complex_matrix(5, 5);
    CMat scrambled = image;
    for (int r = 0; r < 5; ++r)
        for (int c = 0; c < 5; ++c) scrambled(r, c) = std::polar(std::abs(image(r, c)), rng.uniform());
    CHECK(std::abs(coherence(scrambled, image, MetricDomain::magnitude) - 1.0) < 1e-12);
    CHECK(nmse(scrambled, image, MetricDomain::magnitude) < 1e-12);
}

TEST_CASE("centered moves the DC cell to the middle") {
    CMat image = CMat::Zero(4, 6);
    image(0, 0) = 1.0;
    const CMat shifted = centered(image);
    CHECK(std::abs(shifted(2, 3) - Complex(1.0, 0.0)) == 0.0);
}
