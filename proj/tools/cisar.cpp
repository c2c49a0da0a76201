// cisar - spectrally-notched waveform design and ISAR imaging with missing-data
// recovery. Subcommands wrap the library stages with file-based I/O so a full
// pipeline run and its staged equivalent produce identical artifacts.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <Eigen/Core>
#include <json.hpp>

#include "cisar/config.hpp"
#include "cisar/design.hpp"
#include "cisar/imaging.hpp"
#include "cisar/io.hpp"
#include "cisar/pipeline.hpp"
#include "cisar/recovery.hpp"
#include "cisar/scene.hpp"
#include "cisar/signal.hpp"
#include "cisar/spectrum.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;
    int threads = 1;
};

cisar::ScenarioConfig load_config(const CommonArgs& args) {
    cisar::ScenarioConfig cfg = cisar::load_scenario(args.config_path);
    if (args.seed) cfg.seed = *args.seed;
    return cfg;
}

void add_common(CLI::App* cmd, CommonArgs& args, bool needs_config = true) {
    auto* opt = cmd->add_option("--config", args.config_path, "scenario config (JSON)");
    if (needs_config) opt->required();
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_option("--seed", args.seed, "override the config seed");
    cmd->add_option("--threads", args.threads, "linear-algebra thread count");
}

int run_design(const CommonArgs& args) {
    const cisar::ScenarioConfig cfg = load_config(args);
    fs::create_directories(args.out_dir);

    cisar::DesignProblem problem;
    problem.reference = cisar::chirp_reference(cfg.waveform.length, cfg.waveform.band_fraction);
    problem.bands = cfg.notch_bands();
    problem.block_size = cfg.waveform.block_size;
    problem.overlap = cfg.waveform.overlap;
    problem.solver = cfg.solver;

    const auto start = std::chrono::steady_clock::now();
    const cisar::DesignSolution sol = cisar::design_waveform(problem);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    cisar::write_sequence(fs::path(args.out_dir) / "waveform.bin", sol.c);
    cisar::write_sequence(fs::path(args.out_dir) / "reference.bin", problem.reference);

    json report;
    report["objective"] = sol.objective;
    report["kkt_residual"] = sol.kkt_residual;
    report["newton_iterations"] = sol.iterations;
    report["wall_seconds"] = seconds;
    report["block_energies"] = sol.block_energies;
    json bands = json::array();
    for (const cisar::BandCompliance& rec : cisar::check_constraints(sol.c, problem.bands))
        bands.push_back({{"f_lo", rec.band.f_lo},
                         {"f_hi", rec.band.f_hi},
                         {"depth_db", rec.band.depth_db},
                         {"energy", rec.energy},
                         {"budget", rec.budget},
                         {"margin_db", rec.margin_db},
                         {"satisfied", rec.satisfied}});
    report["bands"] = bands;
    std::ofstream out(fs::path(args.out_dir) / "design_report.json");
    out << report.dump(2) << "\n";
    std::cout << "designed waveform of length " << sol.c.size() << " (objective "
              << cisar::format_double(sol.objective) << ") -> " << args.out_dir << "\n";
    return 0;
}

int run_analyze(const CommonArgs& args, const std::string& in, const std::string& reference_path,
                int segment, int overlap, const std::string& window, const std::string& norm,
                int af_oversample) {
    const cisar::CVec c = cisar::read_sequence(in);
    fs::create_directories(args.out_dir);

    cisar::WelchParams params = cisar::default_welch_params(static_cast<int>(c.size()));
    if (segment > 0) params.segment_len = segment;
    if (overlap >= 0) params.overlap_len = overlap;
    params.window = cisar::window_from_name(window);
    const cisar::PsdReference ref_kind =
        norm == "mean" ? cisar::PsdReference::mean : cisar::PsdReference::peak;

    std::optional<cisar::PsdEstimate> ref_psd;
    if (!reference_path.empty())
        ref_psd = cisar::welch_psd(cisar::read_sequence(reference_path), params, nullptr, ref_kind);
    const cisar::PsdEstimate psd =
        cisar::welch_psd(c, params, ref_psd ? &*ref_psd : nullptr, ref_kind);
    cisar::write_psd_csv(fs::path(args.out_dir) / "psd.csv", psd);

    const cisar::AutocorrelationProfile af = cisar::autocorrelation(c, af_oversample);
    cisar::write_autocorrelation_csv(fs::path(args.out_dir) / "autocorrelation.csv", af);

    json summary;
    summary["psl_db"] = cisar::psl(af);
    summary["mainlobe_width_3db"] = cisar::mainlobe_width_3db(af);
    if (!args.config_path.empty()) {
        const cisar::ScenarioConfig cfg = load_config(args);
        const std::vector<cisar::FrequencyBand> bands = cfg.notch_bands();
        json depths = json::array();
        for (size_t k = 0; k < bands.size(); ++k) {
            std::vector<cisar::FrequencyBand> others;
            for (size_t j = 0; j < bands.size(); ++j)
                if (j != k) others.push_back(bands[j]);
            depths.push_back({{"f_lo", bands[k].f_lo},
                              {"f_hi", bands[k].f_hi},
                              {"configured_depth_db", bands[k].depth_db},
                              {"measured_depth_db", cisar::notch_depth(psd, bands[k], others)}});
        }
        summary["notches"] = depths;
    }
    std::ofstream out(fs::path(args.out_dir) / "analysis.json");
    out << summary.dump(2) << "\n";
    std::cout << "analysis written to " << args.out_dir << "\n";
    return 0;
}

int run_simulate(const CommonArgs& args, const std::string& case_label,
                 const std::string& waveform_path) {
    const cisar::ScenarioConfig cfg = load_config(args);
    const cisar::CaseLabel label = cisar::case_from_name(case_label);
    fs::create_directories(args.out_dir);

    const cisar::CVec waveform = waveform_path.empty()
                                     ? cisar::pipeline_waveform(cfg, label)
                                     : cisar::read_sequence(waveform_path);
    const std::vector<cisar::InterferenceSource> sources =
        label == cisar::CaseLabel::gt ? std::vector<cisar::InterferenceSource>{} : cfg.sources();
    const double snr =
        label == cisar::CaseLabel::gt ? std::numeric_limits<double>::infinity() : cfg.snr_db;

    const cisar::DataMatrix raw = cisar::simulate_dwell(cfg.scene(), waveform, sources, snr, cfg.seed);
    cisar::write_matrix(fs::path(args.out_dir) / "data_raw.bin", raw.values);

    const cisar::ObservationMask mask = cisar::pipeline_mask(cfg, label);
    const cisar::DataMatrix masked = mask.empty() ? raw : cisar::apply_mask(raw, mask);
    cisar::save_mask(fs::path(args.out_dir) / "mask.json", mask);
    cisar::write_matrix(fs::path(args.out_dir) / "data_masked.bin", masked.values);
    std::cout << "simulated " << raw.values.rows() << "x" << raw.values.cols() << " dwell -> "
              << args.out_dir << "\n";
    return 0;
}

int run_recover(const CommonArgs& args, const std::string& in, const std::string& mask_path,
                const std::string& method_name) {
    const cisar::ScenarioConfig cfg = load_config(args);
    const cisar::CMat masked = cisar::read_matrix(in);
    const cisar::ObservationMask mask = cisar::load_mask(mask_path);
    const cisar::RecoveryMethod method = method_name.empty()
                                             ? cfg.recovery.method
                                             : cisar::recovery_method_from_name(method_name);
    fs::create_directories(args.out_dir);

    std::vector<cisar::RecoveryTraceRow> trace;
    const cisar::CMat image = cisar::recover_image(cfg, method, masked, mask, &trace);
    cisar::write_matrix(fs::path(args.out_dir) / "image.bin", image);
    cisar::write_matrix(fs::path(args.out_dir) / "data_recovered.bin", cisar::reconstruct_data(image));
    std::vector<std::vector<double>> rows;
    for (const cisar::RecoveryTraceRow& r : trace)
        rows.push_back({static_cast<double>(r.iteration), r.objective, r.shannon_rank, r.residual});
    cisar::write_csv(fs::path(args.out_dir) / "recovery_trace.csv",
                     {"iteration", "objective", "shannon_rank", "residual"}, rows);
    std::cout << "recovered image via " << cisar::recovery_method_name(method) << " -> "
              << args.out_dir << "\n";
    return 0;
}

int run_image(const std::string& in, const std::string& out, const std::string& heatmap) {
    const cisar::CMat data = cisar::read_matrix(in);
    const cisar::CMat image = cisar::rd_image(data);
    cisar::write_matrix(out, image);
    if (!heatmap.empty()) cisar::write_heatmap_pgm(heatmap, image);
    std::cout << "image written to " << out << "\n";
    return 0;
}

int run_metrics(const std::string& ref, const std::string& in, const std::string& out,
                const std::string& scenario, const std::string& case_label) {
    const cisar::CMat reference = cisar::read_matrix(ref);
    const cisar::CMat image = cisar::read_matrix(in);
    const double ic = cisar::image_contrast(image);
    const double coh = cisar::coherence(image, reference);
    const double err = cisar::nmse(image, reference);
    if (!out.empty()) cisar::write_metrics_csv(out, scenario, case_label, ic, coh, err);
    std::cout << scenario << "," << case_label << "," << cisar::format_double(ic) << ","
              << cisar::format_double(coh) << "," << cisar::format_double(err) << "\n";
    return 0;
}

int run_full(const CommonArgs& args, const std::string& case_label) {
    const cisar::ScenarioConfig cfg = load_config(args);
    const cisar::PipelineResult result =
        cisar::run_pipeline(cfg, cisar::case_from_name(case_label), args.out_dir);
    std::cout << cfg.name << "," << cisar::case_name(result.label) << ","
              << cisar::format_double(result.ic) << "," << cisar::format_double(result.coh) << ","
              << cisar::format_double(result.nmse) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectrally-notched waveform design and ISAR imaging toolkit"};
    app.require_subcommand(1);

    CommonArgs args;
    std::string case_label = "gt";
    std::string in, out, reference, mask_path, method, heatmap, scenario = "scenario";
    int segment = 0, overlap = -1, af_oversample = 8;
    std::string window = "blackman-harris", norm = "peak";

    auto* design = app.add_subcommand("design", "synthesize the notched waveform");
    add_common(design, args);

    auto* analyze = app.add_subcommand("analyze", "Welch PSD and autocorrelation analysis");
    add_common(analyze, args, false);
    analyze->add_option("--in", in, "waveform file")->required();
    analyze->add_option("--reference", reference, "reference waveform for PSD normalization");
    analyze->add_option("--segment", segment, "Welch segment length");
    analyze->add_option("--overlap", overlap, "Welch overlap length");
    analyze->add_option("--window", window, "blackman-harris|hamming|rectangular");
    analyze->add_option("--norm", norm, "PSD reference level: peak|mean");
    analyze->add_option("--af-oversample", af_oversample, "autocorrelation lag-grid refinement");

    auto* simulate = app.add_subcommand("simulate", "generate the (masked) dwell data matrix");
    add_common(simulate, args);
    simulate->add_option("--case", case_label, "gt|standard|notched|n-cs|n-rm")->required();
    simulate->add_option("--waveform", reference, "transmit waveform (designed when omitted)");

    auto* recover = app.add_subcommand("recover", "recover an image from masked data");
    add_common(recover, args);
    recover->add_option("--in", in, "masked data matrix")->required();
    recover->add_option("--mask", mask_path, "observation mask (JSON)")->required();
    recover->add_option("--method", method, "sl0|rm (default: config)");

    auto* image = app.add_subcommand("image", "range-Doppler image formation");
    image->add_option("--in", in, "data matrix")->required();
    image->add_option("--out", out, "output image file")->required();
    image->add_option("--heatmap", heatmap, "optional PGM heatmap path");

    auto* metrics = app.add_subcommand("metrics", "IC/COH/NMSE of an image against a reference");
    metrics->add_option("--ref", reference, "reference image")->required();
    metrics->add_option("--in", in, "image under test")->required();
    metrics->add_option("--out", out, "metrics CSV to append to");
    metrics->add_option("--scenario", scenario, "scenario column value");
    metrics->add_option("--case", case_label, "case column value");

    auto* run = app.add_subcommand("run", "full pipeline for one case");
    add_common(run, args);
    run->add_option("--case", case_label, "gt|standard|notched|n-cs|n-rm")->required();

    CLI11_PARSE(app, argc, argv);

    Eigen::setNbThreads(std::max(1, args.threads));

    try {
        if (design->parsed()) return run_design(args);
        if (analyze->parsed())
            return run_analyze(args, in, reference, segment, overlap, window, norm, af_oversample);
        if (simulate->parsed()) return run_simulate(args, case_label, reference);
        if (recover->parsed()) return run_recover(args, in, mask_path, method);
        if (image->parsed()) return run_image(in, out, heatmap);
        if (metrics->parsed()) return run_metrics(reference, in, out, scenario, case_label);
        if (run->parsed()) return run_full(args, case_label);
    } catch (const cisar::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
