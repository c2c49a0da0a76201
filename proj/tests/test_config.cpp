#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "cisar/config.hpp"

using namespace cisar;
namespace fs = std::filesystem;

namespace {

const char* kExample = R"({
  "name": "two-interferers",
  "radar": {
    "center_frequency_hz": 14.0e9,
    "bandwidth_hz": 2.0e9,
    "frequency_step_hz": 4.5e6,
    "rotation_span_deg": 15.0,
    "angle_step_deg": 0.1
  },
  "waveform": {"length": 5000, "block_size": 500, "overlap": 250},
  "emitters": [
    {"f_lo_hz": 13.38e9, "f_hi_hz": 13.62e9, "depth_db": 40.0, "power_db": 20.0},
    {"f_lo_hz": 14.53e9, "f_hi_hz": 14.65e9, "depth_db": 30.0, "power_db": 20.0,
     "activity_deg": [0.0, 7.0]}
  ],
  "scene": {"scatterers": [
    {"x_m": 0.0, "y_m": 0.0, "amplitude": [1.0, 0.0]},
    {"x_m": 1.5, "y_m": -0.8, "amplitude": [0.5, 0.5]}
  ]},
  "masks": {"dwell_fraction": 0.5, "pattern": "block", "block_start": 10},
  "recovery": {"method": "rm", "rm": {"lambda_mode": "fraction", "lambda": 0.05}},
  "snr_db": null,
  "seed": 42,
  "output_dir": "runs"
})";

}  // namespace

TEST_CASE("scenario parses with the documented schema") {
    const ScenarioConfig cfg = scenario_from_json_text(kExample);
    CHECK(cfg.name == "two-interferers");
    CHECK(cfg.radar.bandwidth_hz == 2.0e9);
    CHECK(cfg.waveform.block_size == 500);
    CHECK(cfg.emitters.size() == 2);
    CHECK(cfg.scatterers.size() == 2);
    CHECK(cfg.masks.pattern == DwellPattern::block);
    CHECK(cfg.recovery.method == RecoveryMethod::rm);
    CHECK(std::isinf(cfg.snr_db));
    CHECK(cfg.seed == 42);

    const ScattererScene scene = cfg.scene();
    CHECK(scene.pulse_count() == 150);
    CHECK(scene.frequency_bin_count() == 445);

    const std::vector<FrequencyBand> bands = cfg.notch_bands();
    REQUIRE(bands.size() == 2);
    CHECK(bands[0].f_lo == doctest::Approx(0.19).epsilon(1e-12));
    CHECK(bands[0].f_hi == doctest::Approx(0.31).epsilon(1e-12));
    CHECK(bands[0].energy_budget == doctest::Approx(1e-4).epsilon(1e-12));
    CHECK(bands[1].f_lo == doctest::Approx(0.765).epsilon(1e-12));
    CHECK(bands[1].energy_budget == doctest::Approx(1e-3).epsilon(1e-12));

    const std::vector<InterferenceSource> sources = cfg.sources();
    REQUIRE(sources.size() == 2);
    CHECK(sources[0].power == doctest::Approx(100.0).epsilon(1e-12));
    CHECK_FALSE(sources[0].activity_deg.has_value());
    REQUIRE(sources[1].activity_deg.has_value());
    CHECK(sources[1].activity_deg->second == 7.0);
}

TEST_CASE("round trip through json text preserves the configuration") {
    const ScenarioConfig cfg = scenario_from_json_text(kExample);
    const std::string text = scenario_to_json_text(cfg);
    const ScenarioConfig back = scenario_from_json_text(text);
    CHECK(scenario_to_json_text(back) == text);
}

TEST_CASE("a manifest with an embedded config loads directly") {
    const ScenarioConfig cfg = scenario_from_json_text(kExample);
    const std::string manifest =
        std::string("{\"tool\":\"cisar\",\"config\":") + scenario_to_json_text(cfg) + "}";
    const ScenarioConfig back = scenario_from_json_text(manifest);
    CHECK(back.name == cfg.name);
    CHECK(back.seed == cfg.seed);
}

TEST_CASE("cross-field validation") {
    SUBCASE("emitter outside the radar band") {
        ScenarioConfig cfg = scenario_from_json_text(kExample);
        cfg.emitters[0].f_hi_hz = 15.5e9;
        CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
    }
    SUBCASE("overlap beyond half a block") {
        ScenarioConfig cfg = scenario_from_json_text(kExample);
        cfg.waveform.overlap = 300;
        CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
    }
    SUBCASE("block larger than the waveform") {
        ScenarioConfig cfg = scenario_from_json_text(kExample);
        cfg.waveform.block_size = 6000;
        CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
    }
    SUBCASE("activity window outside the dwell") {
        ScenarioConfig cfg = scenario_from_json_text(kExample);
        cfg.emitters[1].activity_deg = std::make_pair(10.0, 20.0);
        CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
    }
    SUBCASE("non-integer pulse count") {
        ScenarioConfig cfg = scenario_from_json_text(kExample);
        cfg.radar.angle_step_deg = 0.13;
        CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
    }
}

TEST_CASE("mask json round trip") {
    const fs::path path =
        fs::temp_directory_path() / ("cisar_mask_" + std::to_string(::getpid()) + ".json");
    ObservationMask mask;
    mask.missing_frequency_bins = {3, 5, 8};
    mask.missing_pulse_rows = {1};
    save_mask(path, mask);
    const ObservationMask back = load_mask(path);
    CHECK(back.missing_frequency_bins == mask.missing_frequency_bins);
    CHECK(back.missing_pulse_rows == mask.missing_pulse_rows);
    fs::remove(path);
}

TEST_CASE("malformed files raise IoError") {
    const fs::path path =
        fs::temp_directory_path() / ("cisar_badcfg_" + std::to_string(::getpid()) + ".json");
    {
        std::ofstream out(path);
        out << "{ not json";
    }
    CHECK_THROWS_AS(load_scenario(path), IoError);
    fs::remove(path);
    CHECK_THROWS_AS(load_scenario(path), IoError);
}
