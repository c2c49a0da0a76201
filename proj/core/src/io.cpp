#include "cisar/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>

#include "cisar/imaging.hpp"

namespace cisar {

namespace {

constexpr char kMagic[6] = {'C', 'I', 'S', 'A', 'R', '1'};

void write_u64(std::ofstream& out, std::uint64_t v) {
    unsigned char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
    out.write(reinterpret_cast<const char*>(buf), 8);
}

std::uint64_t read_u64(std::ifstream& in) {
    unsigned char buf[8];
    in.read(reinterpret_cast<char*>(buf), 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
    return v;
}

}  // namespace

void write_matrix(const std::filesystem::path& path, const CMat& m) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("write_matrix: cannot open " + path.string());
    out.write(kMagic, sizeof(kMagic));
    write_u64(out, static_cast<std::uint64_t>(m.rows()));
    write_u64(out, static_cast<std::uint64_t>(m.cols()));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            const double pair[2] = {m(r, c).real(), m(r, c).imag()};
            out.write(reinterpret_cast<const char*>(pair), sizeof(pair));
        }
    }
    if (!out) throw IoError("write_matrix: short write to " + path.string());
}

CMat read_matrix(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("read_matrix: cannot open " + path.string());
    char magic[6];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw IoError("read_matrix: bad magic in " + path.string());
    const std::uint64_t rows = read_u64(in);
    const std::uint64_t cols = read_u64(in);
    if (!in || rows == 0 || cols == 0 || rows > (1ULL << 32) || cols > (1ULL << 32))
        throw IoError("read_matrix: corrupt header in " + path.string());
    CMat m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            double pair[2];
            in.read(reinterpret_cast<char*>(pair), sizeof(pair));
            m(r, c) = Complex(pair[0], pair[1]);
        }
    }
    if (!in) throw IoError("read_matrix: truncated payload in " + path.string());
    return m;
}

void write_sequence(const std::filesystem::path& path, const CVec& c) {
    write_matrix(path, c.transpose());
}

CVec read_sequence(const std::filesystem::path& path) {
    const CMat m = read_matrix(path);
    if (m.rows() != 1 && m.cols() != 1)
        throw IoError("read_sequence: " + path.string() + " is not a vector");
    return m.rows() == 1 ? CVec(m.row(0).transpose()) : CVec(m.col(0));
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path);
    if (!out) throw IoError("write_csv: cannot open " + path.string());
    for (size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << "\n";
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
        out << "\n";
    }
    if (!out) throw IoError("write_csv: short write to " + path.string());
}

void write_psd_csv(const std::filesystem::path& path, const PsdEstimate& psd) {
    std::vector<std::vector<double>> rows;
    rows.reserve(psd.grid.size());
    for (size_t i = 0; i < psd.grid.size(); ++i) rows.push_back({psd.grid[i], psd.values_db[i]});
    write_csv(path, {"frequency", "psd_db"}, rows);
}

void write_autocorrelation_csv(const std::filesystem::path& path, const AutocorrelationProfile& profile) {
    std::vector<std::vector<double>> rows;
    const int half = profile.center();
    rows.reserve(static_cast<size_t>(2 * half + 1));
    for (int m = -half; m <= half; ++m)
        rows.push_back({static_cast<double>(m) / profile.oversample, profile.at_index(m)});
    write_csv(path, {"lag", "af_db"}, rows);
}

void write_heatmap_pgm(const std::filesystem::path& path, const CMat& image, double floor_db) {
    if (!(floor_db < 0.0)) throw InvalidArgument("write_heatmap_pgm: floor must be negative dB");
    const CMat shifted = centered(image);
    const double peak = shifted.cwiseAbs().maxCoeff();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("write_heatmap_pgm: cannot open " + path.string());
    out << "P5\n" << shifted.cols() << " " << shifted.rows() << "\n255\n";
    for (Eigen::Index r = 0; r < shifted.rows(); ++r) {
        for (Eigen::Index c = 0; c < shifted.cols(); ++c) {
            double db = floor_db;
            const double mag = std::abs(shifted(r, c));
            if (peak > 0.0 && mag > 0.0) db = std::max(floor_db, 20.0 * std::log10(mag / peak));
            const double unit = (db - floor_db) / (-floor_db);
            out.put(static_cast<char>(static_cast<unsigned char>(std::lround(unit * 255.0))));
        }
    }
    if (!out) throw IoError("write_heatmap_pgm: short write to " + path.string());
}

}  // namespace cisar
