#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>

#include "cisar/io.hpp"
#include "cisar/pipeline.hpp"
#include "cisar/signal.hpp"

using namespace cisar;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag)
        : path(fs::temp_directory_path() / ("cisar_" + tag + "_" + std::to_string(::getpid()))) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

/// Desk-scale two-interferer scenario: 24 bins x 16 pulses, short waveform.
ScenarioConfig tiny_config() {
    ScenarioConfig cfg;
    cfg.name = "tiny";
    cfg.radar.center_frequency_hz = 10e9;
    cfg.radar.bandwidth_hz = 1e9;
    cfg.radar.frequency_step_hz = 1e9 / 23.0;  // 24 bins
    cfg.radar.rotation_span_deg = 1.6;
    cfg.radar.angle_step_deg = 0.1;  // 16 pulses
    cfg.waveform.length = 96;
    cfg.waveform.block_size = 48;
    cfg.waveform.overlap = 24;
    cfg.emitters = {{10e9 - 0.5e9 + 0.20e9, 10e9 - 0.5e9 + 0.36e9, 25.0, 20.0, std::nullopt},
                    {10e9 - 0.5e9 + 0.70e9, 10e9 - 0.5e9 + 0.85e9, 20.0, 20.0, std::nullopt}};
    cfg.scatterers = {{0.0, 0.0, Complex(1.0, 0.0)},
                      {1.1, 0.6, Complex(0.7, 0.2)},
                      {-0.9, -0.5, Complex(0.4, -0.4)}};
    cfg.seed = 9;
    return cfg;
}

CaseLabel all_cases[] = {CaseLabel::gt, CaseLabel::standard, CaseLabel::notched, CaseLabel::n_cs,
                         CaseLabel::n_rm};

}  // namespace

TEST_CASE("case labels round trip") {
    for (CaseLabel label : all_cases) CHECK(case_from_name(case_name(label)) == label);
    CHECK_THROWS_AS(case_from_name("bogus"), InvalidArgument);
}

TEST_CASE("ground-truth case scores perfectly against itself") {
    TempDir tmp("pipe_gt");
    const PipelineResult result = run_pipeline(tiny_config(), CaseLabel::gt, tmp.path);
    CHECK(result.nmse == 0.0);
    CHECK(std::abs(result.coh - 1.0) < 1e-12);
    CHECK(result.ic > 0.0);
    for (const char* name : {"waveform.bin", "psd.csv", "autocorrelation.csv", "data_raw.bin",
                             "data_masked.bin", "mask.json", "image.bin", "image.pgm", "metrics.csv",
                             "manifest.json"})
        CHECK(fs::exists(tmp.path / name));
}

TEST_CASE("standard case with zero-power emitters reduces to the ground truth") {
    ScenarioConfig cfg = tiny_config();
    for (EmitterConfig& e : cfg.emitters) e.power_db = -std::numeric_limits<double>::infinity();
    TempDir gt_dir("pipe_zp_gt"), std_dir("pipe_zp_std");
    const PipelineResult gt = run_pipeline(cfg, CaseLabel::gt, gt_dir.path);
    const PipelineResult standard = run_pipeline(cfg, CaseLabel::standard, std_dir.path);
    CHECK((gt.image - standard.image).cwiseAbs().maxCoeff() == 0.0);
    CHECK(standard.nmse == 0.0);
}

TEST_CASE("recovered case beats the notched case on the same seed") {
    ScenarioConfig cfg = tiny_config();
    TempDir notched_dir("pipe_notched"), rm_dir("pipe_nrm");
    const PipelineResult notched = run_pipeline(cfg, CaseLabel::notched, notched_dir.path);
    const PipelineResult recovered = run_pipeline(cfg, CaseLabel::n_rm, rm_dir.path);
    CHECK(recovered.nmse < notched.nmse);
}

TEST_CASE("staged subcommand composition reproduces the pipeline artifacts") {
    const ScenarioConfig cfg = tiny_config();
    TempDir pipe_dir("pipe_full");
    const PipelineResult piped = run_pipeline(cfg, CaseLabel::n_cs, pipe_dir.path);

    // stage-by-stage through the same public entry points
    DesignSolution design;
    const CVec waveform = pipeline_waveform(cfg, CaseLabel::n_cs, &design);
    {
        const CVec from_pipeline = read_sequence(pipe_dir.path / "waveform.bin");
        REQUIRE(from_pipeline.size() == waveform.size());
        CHECK((from_pipeline - waveform).cwiseAbs().maxCoeff() == 0.0);
    }
    const DataMatrix raw = simulate_dwell(cfg.scene(), waveform, cfg.sources(), cfg.snr_db, cfg.seed);
    {
        const CMat from_pipeline = read_matrix(pipe_dir.path / "data_raw.bin");
        CHECK((from_pipeline - raw.values).cwiseAbs().maxCoeff() == 0.0);
    }
    const ObservationMask mask = pipeline_mask(cfg, CaseLabel::n_cs);
    const DataMatrix masked = apply_mask(raw, mask);
    {
        const CMat from_pipeline = read_matrix(pipe_dir.path / "data_masked.bin");
        CHECK((from_pipeline - masked.values).cwiseAbs().maxCoeff() == 0.0);
    }
    const CMat image = recover_image(cfg, RecoveryMethod::sl0, masked.values, mask);
    {
        const CMat from_pipeline = read_matrix(pipe_dir.path / "image.bin");
        CHECK((from_pipeline - image).cwiseAbs().maxCoeff() == 0.0);
    }
    const CMat reference = ground_truth_image(cfg);
    CHECK(nmse(image, reference) == piped.nmse);
    CHECK(coherence(image, reference) == piped.coh);
}

TEST_CASE("pipeline runs are reproducible from their manifest") {
    const ScenarioConfig cfg = tiny_config();
    TempDir first("pipe_rep1"), second("pipe_rep2");
    run_pipeline(cfg, CaseLabel::n_rm, first.path);

    const ScenarioConfig from_manifest = load_scenario(first.path / "manifest.json");
    run_pipeline(from_manifest, CaseLabel::n_rm, second.path);

    for (const char* name : {"waveform.bin", "data_raw.bin", "data_masked.bin", "image.bin"}) {
        std::ifstream a(first.path / name, std::ios::binary);
        std::ifstream b(second.path / name, std::ios::binary);
        const std::string bytes_a((std::istreambuf_iterator<char>(a)), {});
        const std::string bytes_b((std::istreambuf_iterator<char>(b)), {});
        CHECK(bytes_a == bytes_b);
    }
}

TEST_CASE("stage failures carry the stage name and leave earlier artifacts") {
    ScenarioConfig cfg = tiny_config();
    // both emitters widened until every frequency bin is notched
    cfg.emitters[0].f_lo_hz = cfg.radar.lo_hz();
    cfg.emitters[0].f_hi_hz = cfg.radar.lo_hz() + 0.55e9;
    cfg.emitters[1].f_lo_hz = cfg.radar.lo_hz() + 0.5e9;
    cfg.emitters[1].f_hi_hz = cfg.radar.hi_hz();
    TempDir tmp("pipe_fail");
    try {
        run_pipeline(cfg, CaseLabel::n_cs, tmp.path);
        FAIL("expected a stage failure");
    } catch (const Error& e) {
        const std::string what = e.what();
        CHECK(what.find("stage 'mask'") != std::string::npos);
    }
    CHECK(fs::exists(tmp.path / "waveform.bin"));
    CHECK(fs::exists(tmp.path / "data_raw.bin"));
    CHECK_FALSE(fs::exists(tmp.path / "image.bin"));
}
