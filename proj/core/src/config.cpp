#include "cisar/config.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "cisar/signal.hpp"

namespace cisar {

using json = nlohmann::ordered_json;

ScattererScene ScenarioConfig::scene() const {
    ScattererScene s;
    s.scatterers = scatterers;
    s.rotation_span_deg = radar.rotation_span_deg;
    s.angle_step_deg = radar.angle_step_deg;
    s.center_frequency_hz = radar.center_frequency_hz;
    s.bandwidth_hz = radar.bandwidth_hz;
    s.frequency_step_hz = radar.frequency_step_hz;
    return s;
}

std::vector<FrequencyBand> ScenarioConfig::notch_bands() const {
    std::vector<FrequencyBand> bands;
    for (const EmitterConfig& e : emitters) {
        // unit-energy reference, so the budget is 10^(-depth/10)
        const double budget = budget_from_depth(e.depth_db, 1.0);
        bands.push_back(
            normalized_band(e.f_lo_hz, e.f_hi_hz, radar.lo_hz(), radar.bandwidth_hz, e.depth_db, budget));
    }
    return bands;
}

std::vector<InterferenceSource> ScenarioConfig::sources() const {
    const std::vector<FrequencyBand> bands = notch_bands();
    std::vector<InterferenceSource> out;
    for (size_t k = 0; k < emitters.size(); ++k) {
        InterferenceSource src;
        src.band = bands[k];
        src.power = std::pow(10.0, emitters[k].power_db / 10.0);
        src.activity_deg = emitters[k].activity_deg;
        out.push_back(src);
    }
    return out;
}

void ScenarioConfig::validate() const {
    scene().validate();
    if (waveform.length < 2) throw InvalidArgument("config: waveform length must be >= 2");
    if (waveform.block_size < 1 || waveform.block_size > waveform.length)
        throw InvalidArgument("config: block size must lie in [1, length]");
    if (waveform.overlap < 0 || 2 * waveform.overlap > waveform.block_size)
        throw InvalidArgument("config: overlap must lie in [0, block_size/2]");
    if (waveform.reference != "chirp")
        throw InvalidArgument("config: unknown reference waveform kind: " + waveform.reference);
    if (!(waveform.band_fraction > 0.0 && waveform.band_fraction <= 1.0))
        throw InvalidArgument("config: band fraction must lie in (0, 1]");
    for (const EmitterConfig& e : emitters) {
        if (!(e.f_lo_hz < e.f_hi_hz) || e.f_lo_hz < radar.lo_hz() || e.f_hi_hz > radar.hi_hz())
            throw InvalidArgument("config: emitter band must lie inside the radar band");
        if (e.activity_deg) {
            const auto& [a, b] = *e.activity_deg;
            if (!(a >= 0.0 && a < b && b <= radar.rotation_span_deg + 1e-12))
                throw InvalidArgument("config: emitter activity window must lie inside the dwell");
        }
    }
    notch_bands();  // validates the normalized bands
    if (!(masks.dwell_fraction > 0.0 && masks.dwell_fraction <= 1.0))
        throw InvalidArgument("config: dwell fraction must lie in (0, 1]");
    if (recovery.rm.init != "sl0" && recovery.rm.init != "pinv")
        throw InvalidArgument("config: rm.init must be 'sl0' or 'pinv'");
    if (!(recovery.rm.lambda >= 0.0) || !(recovery.rm.tau_factor >= 1.0))
        throw InvalidArgument("config: rm parameters out of range");
}

std::string recovery_method_name(RecoveryMethod method) {
    switch (method) {
        case RecoveryMethod::none: return "none";
        case RecoveryMethod::sl0: return "sl0";
        case RecoveryMethod::rm: return "rm";
    }
    return "none";
}

RecoveryMethod recovery_method_from_name(const std::string& name) {
    if (name == "none") return RecoveryMethod::none;
    if (name == "sl0") return RecoveryMethod::sl0;
    if (name == "rm") return RecoveryMethod::rm;
    throw InvalidArgument("unknown recovery method: " + name);
}

std::string dwell_pattern_name(DwellPattern pattern) {
    switch (pattern) {
        case DwellPattern::periodic: return "periodic";
        case DwellPattern::block: return "block";
        case DwellPattern::random: return "random";
    }
    return "periodic";
}

DwellPattern dwell_pattern_from_name(const std::string& name) {
    if (name == "periodic") return DwellPattern::periodic;
    if (name == "block") return DwellPattern::block;
    if (name == "random") return DwellPattern::random;
    throw InvalidArgument("unknown dwell pattern: " + name);
}

namespace {

double get_snr(const json& j) {
    if (!j.contains("snr_db") || j["snr_db"].is_null()) return std::numeric_limits<double>::infinity();
    if (j["snr_db"].is_string()) {
        const std::string s = j["snr_db"].get<std::string>();
        if (s == "inf" || s == "none") return std::numeric_limits<double>::infinity();
        throw InvalidArgument("config: snr_db string must be 'inf'");
    }
    return j["snr_db"].get<double>();
}

template <typename T>
void maybe(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

ScenarioConfig parse_config(const json& j) {
    ScenarioConfig cfg;
    maybe(j, "name", cfg.name);

    if (j.contains("radar")) {
        const json& r = j["radar"];
        maybe(r, "center_frequency_hz", cfg.radar.center_frequency_hz);
        maybe(r, "bandwidth_hz", cfg.radar.bandwidth_hz);
        maybe(r, "frequency_step_hz", cfg.radar.frequency_step_hz);
        maybe(r, "rotation_span_deg", cfg.radar.rotation_span_deg);
        maybe(r, "angle_step_deg", cfg.radar.angle_step_deg);
    }
    if (j.contains("waveform")) {
        const json& w = j["waveform"];
        maybe(w, "length", cfg.waveform.length);
        maybe(w, "block_size", cfg.waveform.block_size);
        maybe(w, "overlap", cfg.waveform.overlap);
        maybe(w, "reference", cfg.waveform.reference);
        maybe(w, "band_fraction", cfg.waveform.band_fraction);
    }
    if (j.contains("emitters")) {
        for (const json& e : j["emitters"]) {
            EmitterConfig ec;
            ec.f_lo_hz = e.at("f_lo_hz").get<double>();
            ec.f_hi_hz = e.at("f_hi_hz").get<double>();
            maybe(e, "depth_db", ec.depth_db);
            maybe(e, "power_db", ec.power_db);
            if (e.contains("activity_deg")) {
                const json& a = e["activity_deg"];
                ec.activity_deg = std::make_pair(a.at(0).get<double>(), a.at(1).get<double>());
            }
            cfg.emitters.push_back(ec);
        }
    }
    if (j.contains("scene")) {
        for (const json& s : j["scene"].value("scatterers", json::array())) {
            Scatterer sc;
            sc.x_m = s.at("x_m").get<double>();
            sc.y_m = s.at("y_m").get<double>();
            if (s.contains("amplitude"))
                sc.amplitude = Complex(s["amplitude"].at(0).get<double>(), s["amplitude"].at(1).get<double>());
            cfg.scatterers.push_back(sc);
        }
    }
    if (j.contains("masks")) {
        const json& m = j["masks"];
        maybe(m, "dwell_fraction", cfg.masks.dwell_fraction);
        if (m.contains("pattern")) cfg.masks.pattern = dwell_pattern_from_name(m["pattern"].get<std::string>());
        maybe(m, "block_start", cfg.masks.block_start);
    }
    if (j.contains("recovery")) {
        const json& r = j["recovery"];
        if (r.contains("method")) cfg.recovery.method = recovery_method_from_name(r["method"].get<std::string>());
        if (r.contains("sl0")) {
            const json& s = r["sl0"];
            maybe(s, "sigma_min", cfg.recovery.sl0.sigma_min);
            maybe(s, "sigma_decay", cfg.recovery.sl0.sigma_decay);
            maybe(s, "step", cfg.recovery.sl0.step);
            maybe(s, "inner_iterations", cfg.recovery.sl0.inner_iterations);
        }
        if (r.contains("rm")) {
            const json& m = r["rm"];
            if (m.contains("lambda_mode")) {
                const std::string mode = m["lambda_mode"].get<std::string>();
                if (mode == "absolute") cfg.recovery.rm.lambda_mode = RmLambdaMode::absolute;
                else if (mode == "fraction") cfg.recovery.rm.lambda_mode = RmLambdaMode::fraction;
                else throw InvalidArgument("config: lambda_mode must be 'absolute' or 'fraction'");
            }
            maybe(m, "lambda", cfg.recovery.rm.lambda);
            maybe(m, "tau_factor", cfg.recovery.rm.tau_factor);
            maybe(m, "max_iterations", cfg.recovery.rm.max_iterations);
            maybe(m, "init", cfg.recovery.rm.init);
        }
    }
    if (j.contains("solver")) {
        const json& s = j["solver"];
        maybe(s, "feasibility_tol", cfg.solver.feasibility_tol);
        maybe(s, "gap_rel", cfg.solver.gap_rel);
        maybe(s, "gap_floor", cfg.solver.gap_floor);
        maybe(s, "barrier_mu", cfg.solver.barrier_mu);
        maybe(s, "dense_cap", cfg.solver.dense_cap);
    }
    cfg.snr_db = get_snr(j);
    maybe(j, "seed", cfg.seed);
    maybe(j, "output_dir", cfg.output_dir);
    cfg.validate();
    return cfg;
}

json config_to_json(const ScenarioConfig& cfg) {
    json j;
    j["name"] = cfg.name;
    j["radar"] = {{"center_frequency_hz", cfg.radar.center_frequency_hz},
                  {"bandwidth_hz", cfg.radar.bandwidth_hz},
                  {"frequency_step_hz", cfg.radar.frequency_step_hz},
                  {"rotation_span_deg", cfg.radar.rotation_span_deg},
                  {"angle_step_deg", cfg.radar.angle_step_deg}};
    j["waveform"] = {{"length", cfg.waveform.length},
                     {"block_size", cfg.waveform.block_size},
                     {"overlap", cfg.waveform.overlap},
                     {"reference", cfg.waveform.reference},
                     {"band_fraction", cfg.waveform.band_fraction}};
    j["emitters"] = json::array();
    for (const EmitterConfig& e : cfg.emitters) {
        json je = {{"f_lo_hz", e.f_lo_hz},
                   {"f_hi_hz", e.f_hi_hz},
                   {"depth_db", e.depth_db},
                   {"power_db", e.power_db}};
        if (e.activity_deg) je["activity_deg"] = {e.activity_deg->first, e.activity_deg->second};
        j["emitters"].push_back(je);
    }
    json scatterers = json::array();
    for (const Scatterer& s : cfg.scatterers)
        scatterers.push_back({{"x_m", s.x_m},
                              {"y_m", s.y_m},
                              {"amplitude", {s.amplitude.real(), s.amplitude.imag()}}});
    j["scene"] = {{"scatterers", scatterers}};
    j["masks"] = {{"dwell_fraction", cfg.masks.dwell_fraction},
                  {"pattern", dwell_pattern_name(cfg.masks.pattern)},
                  {"block_start", cfg.masks.block_start}};
    j["recovery"] = {
        {"method", recovery_method_name(cfg.recovery.method)},
        {"sl0",
         {{"sigma_min", cfg.recovery.sl0.sigma_min},
          {"sigma_decay", cfg.recovery.sl0.sigma_decay},
          {"step", cfg.recovery.sl0.step},
          {"inner_iterations", cfg.recovery.sl0.inner_iterations}}},
        {"rm",
         {{"lambda_mode", cfg.recovery.rm.lambda_mode == RmLambdaMode::fraction ? "fraction" : "absolute"},
          {"lambda", cfg.recovery.rm.lambda},
          {"tau_factor", cfg.recovery.rm.tau_factor},
          {"max_iterations", cfg.recovery.rm.max_iterations},
          {"init", cfg.recovery.rm.init}}}};
    j["solver"] = {{"feasibility_tol", cfg.solver.feasibility_tol},
                   {"gap_rel", cfg.solver.gap_rel},
                   {"gap_floor", cfg.solver.gap_floor},
                   {"barrier_mu", cfg.solver.barrier_mu},
                   {"dense_cap", cfg.solver.dense_cap}};
    if (std::isfinite(cfg.snr_db)) j["snr_db"] = cfg.snr_db;
    else j["snr_db"] = nullptr;
    j["seed"] = cfg.seed;
    j["output_dir"] = cfg.output_dir;
    return j;
}

}  // namespace

ScenarioConfig scenario_from_json_text(const std::string& text) {
    json j = json::parse(text);
    // accept a run manifest directly: the resolved config lives under "config"
    if (j.contains("config") && j["config"].is_object()) j = j["config"];
    return parse_config(j);
}

std::string scenario_to_json_text(const ScenarioConfig& config) {
    return config_to_json(config).dump(2) + "\n";
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("load_scenario: cannot open " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    try {
        return scenario_from_json_text(text);
    } catch (const json::exception& e) {
        throw IoError("load_scenario: " + path.string() + ": " + e.what());
    }
}

void save_mask(const std::filesystem::path& path, const ObservationMask& mask) {
    json j;
    j["missing_frequency_bins"] = mask.missing_frequency_bins;
    j["missing_pulse_rows"] = mask.missing_pulse_rows;
    std::ofstream out(path);
    if (!out) throw IoError("save_mask: cannot open " + path.string());
    out << j.dump(2) << "\n";
}

ObservationMask load_mask(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("load_mask: cannot open " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw IoError("load_mask: " + path.string() + ": " + e.what());
    }
    ObservationMask mask;
    if (j.contains("missing_frequency_bins"))
        mask.missing_frequency_bins = j["missing_frequency_bins"].get<std::vector<int>>();
    if (j.contains("missing_pulse_rows"))
        mask.missing_pulse_rows = j["missing_pulse_rows"].get<std::vector<int>>();
    return mask;
}

}  // namespace cisar
