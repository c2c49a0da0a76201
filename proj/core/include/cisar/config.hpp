#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "cisar/design.hpp"
#include "cisar/recovery.hpp"
#include "cisar/scene.hpp"
#include "cisar/types.hpp"

namespace cisar {

struct RadarParams {
    double center_frequency_hz = 14.0e9;
    double bandwidth_hz = 2.0e9;
    double frequency_step_hz = 4.5e6;
    double rotation_span_deg = 15.0;
    double angle_step_deg = 0.1;

    double lo_hz() const { return center_frequency_hz - bandwidth_hz / 2.0; }
    double hi_hz() const { return center_frequency_hz + bandwidth_hz / 2.0; }
};

struct WaveformParams {
    int length = 5000;
    int block_size = 500;
    int overlap = 250;
    std::string reference = "chirp";
    double band_fraction = 1.0;
};

struct EmitterConfig {
    double f_lo_hz = 0.0;
    double f_hi_hz = 0.0;
    double depth_db = 30.0;
    double power_db = 20.0;  ///< in-band interference-to-echo ratio
    std::optional<std::pair<double, double>> activity_deg;
};

struct MaskParams {
    double dwell_fraction = 1.0;
    DwellPattern pattern = DwellPattern::periodic;
    int block_start = -1;
};

enum class RecoveryMethod { none, sl0, rm };
enum class RmLambdaMode { absolute, fraction };

struct RmConfig {
    RmLambdaMode lambda_mode = RmLambdaMode::fraction;
    /// Nuclear-norm weight: absolute value, or a fraction of the leading
    /// singular value of the pseudoinverse image.
    double lambda = 0.05;
    double tau_factor = 20.0;
    int max_iterations = 50;
    std::string init = "sl0";  ///< "sl0" or "pinv"
};

struct RecoveryConfig {
    RecoveryMethod method = RecoveryMethod::rm;
    Sl0Params sl0;
    RmConfig rm;
};

/// Full declarative description of one experiment.
struct ScenarioConfig {
    std::string name = "scenario";
    RadarParams radar;
    WaveformParams waveform;
    std::vector<EmitterConfig> emitters;
    std::vector<Scatterer> scatterers;
    MaskParams masks;
    RecoveryConfig recovery;
    SolverOptions solver;
    double snr_db = std::numeric_limits<double>::infinity();
    std::uint64_t seed = 1;
    std::string output_dir = "out";

    ScattererScene scene() const;
    /// Emitter bands normalized to the radar band, budgets from the notch depths.
    std::vector<FrequencyBand> notch_bands() const;
    std::vector<InterferenceSource> sources() const;
    void validate() const;
};

ScenarioConfig load_scenario(const std::filesystem::path& path);
ScenarioConfig scenario_from_json_text(const std::string& text);
std::string scenario_to_json_text(const ScenarioConfig& config);

void save_mask(const std::filesystem::path& path, const ObservationMask& mask);
ObservationMask load_mask(const std::filesystem::path& path);

std::string recovery_method_name(RecoveryMethod method);
RecoveryMethod recovery_method_from_name(const std::string& name);
std::string dwell_pattern_name(DwellPattern pattern);
DwellPattern dwell_pattern_from_name(const std::string& name);

}  // namespace cisar
