#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "cisar/types.hpp"

namespace cisar {

struct Scatterer {
    double x_m = 0.0;  ///< range coordinate at aspect angle 0
    double y_m = 0.0;  ///< cross-range coordinate
    Complex amplitude{1.0, 0.0};
};

/// Point-scatterer target geometry plus the radar frequency/angle grids.
/// The dwell spans `rotation_span_deg` of target rotation in steps of
/// `angle_step_deg` (one pulse per step), and the frequency grid covers
/// [fc - B/2, fc + B/2] with the given step; bin count = floor(B/step) + 1.
struct ScattererScene {
    std::vector<Scatterer> scatterers;
    double rotation_span_deg = 15.0;
    double angle_step_deg = 0.1;
    double center_frequency_hz = 14.0e9;
    double bandwidth_hz = 2.0e9;
    double frequency_step_hz = 4.5e6;

    int pulse_count() const;
    int frequency_bin_count() const;
    double frequency_at(int bin) const;
    double angle_at(int pulse) const;  ///< degrees, pulse 0 at 0 deg
    void validate() const;
};

struct InterferenceSource {
    FrequencyBand band;         ///< normalized to the radar band
    double power = 0.0;         ///< in-band per-bin power relative to the waveform's mean bin power
    /// Aspect-angle window [start, stop) in degrees during which the emitter
    /// transmits; absent means always active.
    std::optional<std::pair<double, double>> activity_deg;
};

struct ObservationMask {
    std::vector<int> missing_frequency_bins;
    std::vector<int> missing_pulse_rows;

    bool empty() const { return missing_frequency_bins.empty() && missing_pulse_rows.empty(); }
};

/// Slow-time (rows) by frequency (columns) data matrix. Masked entries are
/// exactly zero once a mask has been applied.
struct DataMatrix {
    CMat values;
    ObservationMask mask;
};

/// Frequency-domain echo of the rotated scene at one aspect angle:
/// sum_p amplitude_p * exp(-j 4 pi f_n r_p(theta) / c), where r_p is the
/// scatterer's radial coordinate after rotating the scene by theta.
CVec target_spectrum(const ScattererScene& scene, int angle_index);

/// Sample the waveform's DTFT at the scenario's frequency bins (normalized
/// to the radar band).
CVec waveform_spectrum(const CVec& waveform, const ScattererScene& scene);

/// Simulate one full dwell: per pulse, the target spectrum is shaped by the
/// transmitted waveform spectrum, active interferers and receiver noise are
/// superimposed, and the result is pulse-compressed with the same waveform.
/// `snr_db` is the single-pulse post-compression SNR for a unit-amplitude
/// scatterer; +inf disables noise. A seed is required when noise or sources
/// are present; rows draw from independent per-row substreams.
DataMatrix simulate_dwell(const ScattererScene& scene, const CVec& waveform,
                          const std::vector<InterferenceSource>& sources, double snr_db,
                          std::optional<std::uint64_t> seed);

/// Zero the masked frequency columns and pulse rows. Idempotent.
DataMatrix apply_mask(const DataMatrix& data, const ObservationMask& mask);

/// Mask covering the frequency bins that fall inside the given bands.
ObservationMask mask_from_bands(const std::vector<FrequencyBand>& bands, int frequency_bins);

enum class DwellPattern { periodic, block, random };

/// Slow-time mask leaving `fraction` of the M pulses observed. `periodic`
/// spreads the kept pulses evenly, `block` removes one contiguous run
/// (starting at `block_start`, centered by default), `random` removes a
/// seed-reproducible subset.
ObservationMask mask_from_dwell_fraction(double fraction, DwellPattern pattern, int pulses,
                                         std::uint64_t seed = 0, int block_start = -1);

/// For each pulse row, the indices of the sources active at that aspect
/// angle (half-open degree windows, converted via the angle step).
std::vector<std::vector<int>> activity_windows(const std::vector<InterferenceSource>& sources,
                                               int pulses, double angle_step_deg);

}  // namespace cisar
