#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "cisar/config.hpp"
#include "cisar/design.hpp"
#include "cisar/imaging.hpp"
#include "cisar/recovery.hpp"
#include "cisar/scene.hpp"

namespace cisar {

/// The five experiment cases: ground truth (clean chirp, no interference),
/// a plain chirp among interferers, the notched waveform, and the notched
/// waveform followed by smoothed-l0 or rank-minimization recovery.
enum class CaseLabel { gt, standard, notched, n_cs, n_rm };

std::string case_name(CaseLabel label);
CaseLabel case_from_name(const std::string& name);

struct StageTiming {
    std::string stage;
    double seconds = 0.0;
};

struct PipelineResult {
    CaseLabel label = CaseLabel::gt;
    std::filesystem::path out_dir;
    double ic = 0.0;
    double coh = 0.0;
    double nmse = 0.0;
    CMat image;
    std::map<std::string, std::filesystem::path> artifacts;
    std::vector<StageTiming> timings;
};

/// Transmit waveform for a case: the reference chirp for gt/standard, the
/// block-designed notched waveform otherwise. Also returns the design
/// solution when a design ran.
CVec pipeline_waveform(const ScenarioConfig& config, CaseLabel label,
                       DesignSolution* design = nullptr);

/// Severity mask a case observes: the notch bins (recovery cases) plus the
/// dwell-fraction rows (all cases except gt).
ObservationMask pipeline_mask(const ScenarioConfig& config, CaseLabel label);

/// Recover an image from masked data per the configured method. `method`
/// chooses sl0/rm; lambda resolution and initialization follow the config.
CMat recover_image(const ScenarioConfig& config, RecoveryMethod method, const CMat& masked,
                   const ObservationMask& mask, std::vector<RecoveryTraceRow>* trace = nullptr);

/// The clean reference image every case is scored against.
CMat ground_truth_image(const ScenarioConfig& config);

/// Run the full perception-action chain for one case and persist every
/// artifact (waveform, PSD/AF curves, data matrices, image, heatmap, metrics
/// row, run manifest) under out_dir. Stage failures abort with the stage name
/// prefixed; artifacts produced before the failure remain on disk.
PipelineResult run_pipeline(const ScenarioConfig& config, CaseLabel label,
                            const std::filesystem::path& out_dir);

/// Append-or-create a metrics CSV row (scenario, case, IC, COH, NMSE).
void write_metrics_csv(const std::filesystem::path& path, const std::string& scenario,
                       const std::string& case_label, double ic, double coh, double nmse);

std::string version_string();

}  // namespace cisar
