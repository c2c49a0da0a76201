#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "cisar/spectrum.hpp"
#include "cisar/types.hpp"

namespace cisar {

/// Binary matrix format shared repo-wide: magic "CISAR1", u64 row count,
/// u64 column count, then row-major (re, im) little-endian doubles.
void write_matrix(const std::filesystem::path& path, const CMat& m);
CMat read_matrix(const std::filesystem::path& path);

/// Sequences travel as 1 x N matrices.
void write_sequence(const std::filesystem::path& path, const CVec& c);
CVec read_sequence(const std::filesystem::path& path);

/// CSV with a header row; values printed with full round-trip precision.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

void write_psd_csv(const std::filesystem::path& path, const PsdEstimate& psd);
void write_autocorrelation_csv(const std::filesystem::path& path, const AutocorrelationProfile& profile);

/// 8-bit grayscale PGM of the image magnitude in dB, clipped `floor_db` below
/// the peak, fftshifted so the DC cell lands at the center.
void write_heatmap_pgm(const std::filesystem::path& path, const CMat& image, double floor_db = -40.0);

std::string format_double(double v);  ///< shortest round-trip decimal form

}  // namespace cisar
