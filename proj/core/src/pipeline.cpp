#include "cisar/pipeline.hpp"

#include <chrono>
#include <fstream>

#include <json.hpp>

#include "cisar/io.hpp"
#include "cisar/signal.hpp"
#include "cisar/spectrum.hpp"

namespace cisar {

using json = nlohmann::ordered_json;

std::string version_string() { return "0.1.0"; }

std::string case_name(CaseLabel label) {
    switch (label) {
        case CaseLabel::gt: return "gt";
        case CaseLabel::standard: return "standard";
        case CaseLabel::notched: return "notched";
        case CaseLabel::n_cs: return "n-cs";
        case CaseLabel::n_rm: return "n-rm";
    }
    return "gt";
}

CaseLabel case_from_name(const std::string& name) {
    if (name == "gt") return CaseLabel::gt;
    if (name == "standard") return CaseLabel::standard;
    if (name == "notched") return CaseLabel::notched;
    if (name == "n-cs" || name == "ncs") return CaseLabel::n_cs;
    if (name == "n-rm" || name == "nrm") return CaseLabel::n_rm;
    throw InvalidArgument("unknown case label: " + name +
                          " (expected gt|standard|notched|n-cs|n-rm)");
}

namespace {

bool uses_notched_waveform(CaseLabel label) {
    return label == CaseLabel::notched || label == CaseLabel::n_cs || label == CaseLabel::n_rm;
}

bool uses_recovery(CaseLabel label) { return label == CaseLabel::n_cs || label == CaseLabel::n_rm; }

class StageClock {
public:
    explicit StageClock(std::vector<StageTiming>& sink) : sink_(sink) {}

    template <typename F>
    auto run(const std::string& stage, F&& fn) {
        const auto start = std::chrono::steady_clock::now();
        try {
            if constexpr (std::is_void_v<decltype(fn())>) {
                fn();
                record(stage, start);
            } else {
                auto result = fn();
                record(stage, start);
                return result;
            }
        } catch (const Error&) {
            record(stage, start);
            std::throw_with_nested(Error("stage '" + stage + "' failed"));
        }
    }

private:
    void record(const std::string& stage, std::chrono::steady_clock::time_point start) {
        const auto elapsed = std::chrono::steady_clock::now() - start;
        sink_.push_back({stage, std::chrono::duration<double>(elapsed).count()});
    }

    std::vector<StageTiming>& sink_;
};

std::string flatten_error(const std::exception& e) {
    std::string msg = e.what();
    try {
        std::rethrow_if_nested(e);
    } catch (const std::exception& inner) {
        msg += ": " + flatten_error(inner);
    }
    return msg;
}

}  // namespace

CVec pipeline_waveform(const ScenarioConfig& config, CaseLabel label, DesignSolution* design) {
    const CVec reference = chirp_reference(config.waveform.length, config.waveform.band_fraction);
    if (!uses_notched_waveform(label) || config.emitters.empty()) return reference;
    DesignProblem problem;
    problem.reference = reference;
    problem.bands = config.notch_bands();
    problem.block_size = config.waveform.block_size;
    problem.overlap = config.waveform.overlap;
    problem.solver = config.solver;
    DesignSolution sol = design_waveform(problem);
    CVec c = sol.c;
    if (design) *design = std::move(sol);
    return c;
}

ObservationMask pipeline_mask(const ScenarioConfig& config, CaseLabel label) {
    ObservationMask mask;
    const int nf = config.scene().frequency_bin_count();
    const int m = config.scene().pulse_count();
    if (uses_recovery(label) && !config.emitters.empty())
        mask = mask_from_bands(config.notch_bands(), nf);
    if (label != CaseLabel::gt && config.masks.dwell_fraction < 1.0) {
        const ObservationMask rows = mask_from_dwell_fraction(
            config.masks.dwell_fraction, config.masks.pattern, m, config.seed, config.masks.block_start);
        mask.missing_pulse_rows = rows.missing_pulse_rows;
    }
    return mask;
}

CMat recover_image(const ScenarioConfig& config, RecoveryMethod method, const CMat& masked,
                   const ObservationMask& mask, std::vector<RecoveryTraceRow>* trace) {
    if (method == RecoveryMethod::none) return rd_image(masked);
    const UndercompleteOperator op_x =
        undercomplete_operator(static_cast<int>(masked.rows()), mask.missing_pulse_rows);
    const UndercompleteOperator op_y =
        undercomplete_operator(static_cast<int>(masked.cols()), mask.missing_frequency_bins);
    if (method == RecoveryMethod::sl0) return sl0_recover(masked, op_x, op_y, config.recovery.sl0, trace);

    RmParams params;
    params.tau = config.recovery.rm.tau_factor * op_x.gram_spectral_norm() * op_y.gram_spectral_norm();
    params.max_iterations = config.recovery.rm.max_iterations;
    const CMat pinv_image = op_x.pinv * masked * op_y.pinv.adjoint();
    if (config.recovery.rm.lambda_mode == RmLambdaMode::absolute) {
        params.lambda = config.recovery.rm.lambda;
    } else {
        const double sigma1 = Eigen::BDCSVD<CMat>(pinv_image).singularValues()(0);
        params.lambda = config.recovery.rm.lambda * sigma1;
    }
    const CMat initial = config.recovery.rm.init == "sl0"
                             ? sl0_recover(masked, op_x, op_y, config.recovery.sl0)
                             : pinv_image;
    return rm_recover(masked, op_x, op_y, params, initial, trace);
}

CMat ground_truth_image(const ScenarioConfig& config) {
    const CVec chirp = chirp_reference(config.waveform.length, config.waveform.band_fraction);
    const DataMatrix clean = simulate_dwell(config.scene(), chirp, {},
                                            std::numeric_limits<double>::infinity(), config.seed);
    return rd_image(clean.values);
}

PipelineResult run_pipeline(const ScenarioConfig& config, CaseLabel label,
                            const std::filesystem::path& out_dir) {
    config.validate();
    std::filesystem::create_directories(out_dir);

    PipelineResult result;
    result.label = label;
    result.out_dir = out_dir;
    StageClock clock(result.timings);
    auto artifact = [&](const std::string& key, const std::string& file) {
        result.artifacts[key] = out_dir / file;
        return out_dir / file;
    };

    try {
        // --- waveform ---------------------------------------------------
        DesignSolution design;
        const bool designed = uses_notched_waveform(label) && !config.emitters.empty();
        const CVec waveform = clock.run("design", [&] {
            const CVec c = pipeline_waveform(config, label, &design);
            write_sequence(artifact("waveform", "waveform.bin"), c);
            if (designed) {
                json report;
                report["objective"] = design.objective;
                report["kkt_residual"] = design.kkt_residual;
                report["newton_iterations"] = design.iterations;
                report["block_energies"] = design.block_energies;
                json bands = json::array();
                const std::vector<BandCompliance> compliance =
                    check_constraints(design.c, config.notch_bands());
                for (const BandCompliance& rec : compliance)
                    bands.push_back({{"f_lo", rec.band.f_lo},
                                     {"f_hi", rec.band.f_hi},
                                     {"depth_db", rec.band.depth_db},
                                     {"energy", rec.energy},
                                     {"budget", rec.budget},
                                     {"margin_db", rec.margin_db},
                                     {"satisfied", rec.satisfied}});
                report["bands"] = bands;
                std::ofstream out(artifact("design_report", "design_report.json"));
                out << report.dump(2) << "\n";
            }
            return c;
        });

        // --- waveform analysis -------------------------------------------
        clock.run("analyze", [&] {
            const WelchParams params = default_welch_params(static_cast<int>(waveform.size()));
            const CVec reference = chirp_reference(config.waveform.length, config.waveform.band_fraction);
            const PsdEstimate ref_psd = welch_psd(reference, params);
            const PsdEstimate psd = welch_psd(waveform, params, &ref_psd);
            write_psd_csv(artifact("psd", "psd.csv"), psd);
            write_autocorrelation_csv(artifact("af", "autocorrelation.csv"),
                                      autocorrelation(waveform, 8));
        });

        // --- dwell simulation --------------------------------------------
        const DataMatrix raw = clock.run("simulate", [&] {
            const std::vector<InterferenceSource> sources =
                label == CaseLabel::gt ? std::vector<InterferenceSource>{} : config.sources();
            const double snr = label == CaseLabel::gt ? std::numeric_limits<double>::infinity()
                                                      : config.snr_db;
            DataMatrix data = simulate_dwell(config.scene(), waveform, sources, snr, config.seed);
            write_matrix(artifact("data_raw", "data_raw.bin"), data.values);
            return data;
        });

        // --- masking -----------------------------------------------------
        ObservationMask mask;
        const DataMatrix masked = clock.run("mask", [&] {
            mask = pipeline_mask(config, label);
            DataMatrix data = mask.empty() ? raw : apply_mask(raw, mask);
            save_mask(artifact("mask", "mask.json"), mask);
            write_matrix(artifact("data_masked", "data_masked.bin"), data.values);
            return data;
        });

        // --- recovery + image formation ------------------------------------
        result.image = clock.run("image", [&] {
            CMat image;
            if (uses_recovery(label)) {
                std::vector<RecoveryTraceRow> trace;
                const RecoveryMethod method =
                    label == CaseLabel::n_cs ? RecoveryMethod::sl0 : RecoveryMethod::rm;
                image = recover_image(config, method, masked.values, mask, &trace);
                std::vector<std::vector<double>> rows;
                for (const RecoveryTraceRow& r : trace)
                    rows.push_back({static_cast<double>(r.iteration), r.objective, r.shannon_rank,
                                    r.residual});
                write_csv(artifact("trace", "recovery_trace.csv"),
                          {"iteration", "objective", "shannon_rank", "residual"}, rows);
                write_matrix(artifact("data_recovered", "data_recovered.bin"), reconstruct_data(image));
            } else {
                image = rd_image(masked.values);
            }
            write_matrix(artifact("image", "image.bin"), image);
            write_heatmap_pgm(artifact("heatmap", "image.pgm"), image);
            return image;
        });

        // --- metrics -------------------------------------------------------
        clock.run("metrics", [&] {
            const CMat reference = ground_truth_image(config);
            result.ic = image_contrast(result.image);
            result.coh = coherence(result.image, reference);
            result.nmse = nmse(result.image, reference);
            write_metrics_csv(artifact("metrics", "metrics.csv"), config.name, case_name(label),
                              result.ic, result.coh, result.nmse);
        });

        // --- manifest ------------------------------------------------------
        clock.run("manifest", [&] {
            json manifest;
            manifest["tool"] = "cisar";
            manifest["version"] = version_string();
            manifest["case"] = case_name(label);
            manifest["seed"] = config.seed;
            manifest["config"] = json::parse(scenario_to_json_text(config));
            json artifacts;
            for (const auto& [key, path] : result.artifacts) artifacts[key] = path.filename().string();
            manifest["artifacts"] = artifacts;
            json timings = json::array();
            for (const StageTiming& t : result.timings)
                timings.push_back({{"stage", t.stage}, {"seconds", t.seconds}});
            manifest["timings"] = timings;
            std::ofstream out(out_dir / "manifest.json");
            out << manifest.dump(2) << "\n";
            result.artifacts["manifest"] = out_dir / "manifest.json";
        });
    } catch (const Error& e) {
        throw Error(flatten_error(e));
    }

    return result;
}

void write_metrics_csv(const std::filesystem::path& path, const std::string& scenario,
                       const std::string& case_label, double ic, double coh, double nmse) {
    const bool fresh = !std::filesystem::exists(path);
    std::ofstream out(path, std::ios::app);
    if (!out) throw IoError("write_metrics_csv: cannot open " + path.string());
    if (fresh) out << "scenario,case,ic,coh,nmse\n";
    out << scenario << "," << case_label << "," << format_double(ic) << "," << format_double(coh)
        << "," << format_double(nmse) << "\n";
}

}  // namespace cisar
