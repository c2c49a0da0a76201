#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cisar/types.hpp"

namespace cisar {

enum class Window { blackman_harris, hamming, rectangular };

std::vector<double> make_window(Window window, int length);
std::string window_name(Window window);
Window window_from_name(const std::string& name);

struct WelchParams {
    int segment_len = 3000;
    int overlap_len = 2900;
    Window window = Window::blackman_harris;
    /// FFT size = next power of two >= segment_len, times this factor.
    int zero_pad_factor = 4;
};

/// Pick Welch parameters for a sequence of length n: the classic
/// 3000/2900-sample segmentation when it fits, otherwise a single
/// full-length segment.
WelchParams default_welch_params(int n);

enum class PsdReference { peak, mean };

struct PsdEstimate {
    std::vector<double> grid;       ///< normalized frequencies covering [0,1)
    std::vector<double> values_db;  ///< 10*log10(linear / reference_level)
    std::vector<double> values;     ///< linear power density, fs = 1
    double reference_level = 1.0;   ///< linear level rendered as 0 dB
    WelchParams params;
};

/// Welch-averaged periodogram over windowed overlapping segments, normalized
/// as a density over [0,1) (mean linear value ~ signal power for stationary
/// inputs). dB values are relative to the peak or mean of `reference` when
/// given, else of the estimate itself.
PsdEstimate welch_psd(const CVec& c, const WelchParams& params,
                      const PsdEstimate* reference = nullptr,
                      PsdReference norm = PsdReference::peak);

struct AutocorrelationProfile {
    int length = 0;      ///< N; lags run -(N-1)..(N-1)
    int oversample = 1;  ///< lag-grid refinement factor
    /// Magnitudes over the refined lag grid m/oversample, m = -(N-1)*U..(N-1)*U,
    /// normalized so lag 0 is 0 dB.
    std::vector<double> magnitude_db;

    int center() const { return oversample * (length - 1); }
    double at_lag(int lag) const {
        return magnitude_db[static_cast<size_t>(center() + oversample * lag)];
    }
    double at_index(int m) const { return magnitude_db[static_cast<size_t>(center() + m)]; }
};

/// Aperiodic autocorrelation magnitude r(tau) = sum_n c(n) conj(c(n-tau)),
/// as 20*log10(|r|/|r(0)|). With oversample > 1 the lag axis is refined by
/// band-limited interpolation of the lag spectrum (the matched-filter output
/// between integer delays); critically sampled waveforms keep their sidelobe
/// structure only on the refined grid. Must be a power of two.
AutocorrelationProfile autocorrelation(const CVec& c, int oversample = 1);

/// Peak sidelobe level in dB: the largest magnitude outside the mainlobe,
/// where the mainlobe extends from lag 0 to the first local minimum.
/// Profiles that decay monotonically (no sidelobe) report -inf.
double psl(const AutocorrelationProfile& profile);

/// Width in lag units of the contiguous region around lag 0 above -3 dB,
/// with the crossing located by linear interpolation of the amplitude.
double mainlobe_width_3db(const AutocorrelationProfile& profile);

/// Average in-band power over average complement power, in dB (negative for
/// a notch). Bands listed in `exclude` are dropped from the complement, so
/// the reference level is the actual passband when measuring one notch of a
/// multi-notch design.
double notch_depth(const PsdEstimate& psd, const FrequencyBand& band,
                   const std::vector<FrequencyBand>& exclude = {});

}  // namespace cisar
