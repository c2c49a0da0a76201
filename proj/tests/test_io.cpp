#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>

#include "cisar/io.hpp"
#include "support/oracles.hpp"

using namespace cisar;
namespace fs = std::filesystem;

namespace {
struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / ("cisar_io_" + std::to_string(::getpid()))) {
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};
}  // namespace

TEST_CASE("matrix round trip is bit exact") {
    TempDir tmp;
    test::TestRng rng(401);
    const CMat m = rng.complex_matrix(7, 13);
    write_matrix(tmp.path / "m.bin", m);
    const CMat back = read_matrix(tmp.path / "m.bin");
    REQUIRE(back.rows() == 7);
    REQUIRE(back.cols() == 13);
    CHECK((back - m).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("sequence round trip") {
    TempDir tmp;
    test::TestRng rng(403);
    const CVec c = rng.complex_vector(19);
    write_sequence(tmp.path / "c.bin", c);
    const CVec back = read_sequence(tmp.path / "c.bin");
    REQUIRE(back.size() == 19);
    CHECK((back - c).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("bad magic and truncation are reported") {
    TempDir tmp;
    {
        std::ofstream out(tmp.path / "bad.bin", std::ios::binary);
        out << "NOTFMT--------------------------";
    }
    CHECK_THROWS_AS(read_matrix(tmp.path / "bad.bin"), IoError);

    test::TestRng rng(405);
    write_matrix(tmp.path / "short.bin", rng.complex_matrix(4, 4));
    fs::resize_file(tmp.path / "short.bin", 60);
    CHECK_THROWS_AS(read_matrix(tmp.path / "short.bin"), IoError);
    CHECK_THROWS_AS(read_matrix(tmp.path / "missing.bin"), IoError);
}

TEST_CASE("csv emission") {
    TempDir tmp;
    write_csv(tmp.path / "t.csv", {"a", "b"}, {{1.0, 2.5}, {0.1, -3.0}});
    std::ifstream in(tmp.path / "t.csv");
    std::string line;
    std::getline(in, line);
    CHECK(line == "a,b");
    std::getline(in, line);
    CHECK(line == "1,2.5");
    std::getline(in, line);
    CHECK(line == "0.1,-3");
}

TEST_CASE("format_double round trips") {
    for (double v : {1.0, -0.125, 3.141592653589793, 1e-300, 6.02e23}) {
        CHECK(std::stod(format_double(v)) == v);
    }
    CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
}

TEST_CASE("heatmap pgm has the right header and size") {
    TempDir tmp;
    test::TestRng rng(407);
    const CMat image = rng.complex_matrix(6, 9);
    write_heatmap_pgm(tmp.path / "i.pgm", image);
    std::ifstream in(tmp.path / "i.pgm", std::ios::binary);
    std::string magic;
    int w = 0, h = 0, depth = 0;
    in >> magic >> w >> h >> depth;
    CHECK(magic == "P5");
    CHECK(w == 9);
    CHECK(h == 6);
    CHECK(depth == 255);
    in.get();  // single whitespace after the header
    std::vector<char> pixels(54);
    in.read(pixels.data(), 54);
    CHECK(in.gcount() == 54);
}
