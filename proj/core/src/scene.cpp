#include "cisar/scene.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cisar/signal.hpp"

namespace cisar {

namespace {

constexpr double kSpeedOfLight = 299792458.0;
constexpr double kPi = std::numbers::pi;

/// splitmix64; the de-facto standard 64-bit mixer
std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Deterministic substream keyed by (seed, row, purpose): adding or removing
/// a source never perturbs the noise realization of a row.
struct SubStream {
    std::uint64_t state;

    SubStream(std::uint64_t seed, std::uint64_t row, std::uint64_t purpose)
        : state(mix64(mix64(seed ^ 0x5851F42D4C957F2DULL) + mix64(row + 1) * 0x9E3779B97F4A7C15ULL +
                      purpose)) {}

    double uniform() {  // in (0, 1]
        state = mix64(state);
        return (static_cast<double>(state >> 11) + 1.0) * 0x1.0p-53;
    }

    Complex gaussian() {  // unit-variance complex normal
        const double u = uniform();
        const double v = uniform();
        const double mag = std::sqrt(-std::log(u));  // Box-Muller with E|z|^2 = 1
        return Complex(mag * std::cos(2.0 * kPi * v), mag * std::sin(2.0 * kPi * v));
    }
};

}  // namespace

int ScattererScene::pulse_count() const {
    return static_cast<int>(std::llround(rotation_span_deg / angle_step_deg));
}

int ScattererScene::frequency_bin_count() const {
    return static_cast<int>(std::floor(bandwidth_hz / frequency_step_hz)) + 1;
}

double ScattererScene::frequency_at(int bin) const {
    return center_frequency_hz - bandwidth_hz / 2.0 + bin * frequency_step_hz;
}

double ScattererScene::angle_at(int pulse) const { return pulse * angle_step_deg; }

void ScattererScene::validate() const {
    if (scatterers.empty()) throw InvalidArgument("ScattererScene: at least one scatterer required");
    if (!(angle_step_deg > 0.0)) throw InvalidArgument("ScattererScene: angle step must be positive");
    if (!(rotation_span_deg > 0.0)) throw InvalidArgument("ScattererScene: rotation span must be positive");
    const double ratio = rotation_span_deg / angle_step_deg;
    if (std::abs(ratio - std::llround(ratio)) > 1e-9)
        throw InvalidArgument("ScattererScene: rotation span must be an integer number of angle steps");
    if (!(frequency_step_hz > 0.0) || !(bandwidth_hz > 0.0) || !(center_frequency_hz > 0.0))
        throw InvalidArgument("ScattererScene: frequency parameters must be positive");
    if (bandwidth_hz >= 2.0 * center_frequency_hz)
        throw InvalidArgument("ScattererScene: bandwidth exceeds the carrier support");
}

CVec target_spectrum(const ScattererScene& scene, int angle_index) {
    scene.validate();
    if (angle_index < 0 || angle_index >= scene.pulse_count())
        throw InvalidArgument("target_spectrum: angle index out of range");
    const int nf = scene.frequency_bin_count();
    const double theta = scene.angle_at(angle_index) * kPi / 180.0;
    const double cos_t = std::cos(theta);
    const double sin_t = std::sin(theta);

    CVec echo = CVec::Zero(nf);
    for (const Scatterer& s : scene.scatterers) {
        const double radial = s.x_m * cos_t - s.y_m * sin_t;
        const double slope = -4.0 * kPi * radial / kSpeedOfLight;  // phase per Hz, two-way path
        for (int n = 0; n < nf; ++n) {
            const double phase = slope * scene.frequency_at(n);
            echo(n) += s.amplitude * Complex(std::cos(phase), std::sin(phase));
        }
    }
    return echo;
}

CVec waveform_spectrum(const CVec& waveform, const ScattererScene& scene) {
    const int nf = scene.frequency_bin_count();
    std::vector<double> nus(static_cast<size_t>(nf));
    for (int n = 0; n < nf; ++n)
        nus[static_cast<size_t>(n)] = n * scene.frequency_step_hz / scene.bandwidth_hz;
    return dtft(waveform, nus);
}

DataMatrix simulate_dwell(const ScattererScene& scene, const CVec& waveform,
                          const std::vector<InterferenceSource>& sources, double snr_db,
                          std::optional<std::uint64_t> seed) {
    scene.validate();
    validate_sequence(waveform, "simulate_dwell waveform");
    const bool has_noise = std::isfinite(snr_db);
    if ((has_noise || !sources.empty()) && !seed)
        throw InvalidArgument("simulate_dwell: a seed is required with noise or interference");

    const int m = scene.pulse_count();
    const int nf = scene.frequency_bin_count();
    const CVec spectrum = waveform_spectrum(waveform, scene);

    const double mean_bin_power = spectrum.squaredNorm() / nf;
    // Per-bin noise variance fixing the post-compression SNR of a unit
    // scatterer: the matched-filter peak power is (sum |C|^2)^2 / Nf and the
    // compressed noise floor is var * (sum |C|^2) / Nf per range bin.
    const double noise_var =
        has_noise ? spectrum.squaredNorm() / std::pow(10.0, snr_db / 10.0) : 0.0;

    std::vector<std::vector<int>> source_bins;
    for (const InterferenceSource& src : sources) {
        src.band.validate();
        if (src.power < 0.0) throw InvalidArgument("simulate_dwell: interference power must be >= 0");
        source_bins.push_back(band_grid(src.band, nf));
    }
    const std::vector<std::vector<int>> active =
        activity_windows(sources, m, scene.angle_step_deg);

    DataMatrix out;
    out.values.resize(m, nf);
    for (int row = 0; row < m; ++row) {
        // transmitted echo spectrum for this aspect angle
        CVec s = target_spectrum(scene, row).cwiseProduct(spectrum);

        // interference and receiver noise enter the range-domain signal before
        // compression; by unitarity of the transform pair they are synthesized
        // directly on the frequency bins
        for (int k : active[static_cast<size_t>(row)]) {
            const double amp = std::sqrt(sources[static_cast<size_t>(k)].power * mean_bin_power);
            SubStream rng(*seed, static_cast<std::uint64_t>(row), static_cast<std::uint64_t>(k) + 1);
            for (int bin : source_bins[static_cast<size_t>(k)]) s(bin) += amp * rng.gaussian();
        }
        if (has_noise) {
            SubStream rng(*seed, static_cast<std::uint64_t>(row), 0);
            const double amp = std::sqrt(noise_var);
            for (int bin = 0; bin < nf; ++bin) s(bin) += amp * rng.gaussian();
        }

        // pulse compression: matched filter in the frequency domain
        out.values.row(row) = s.cwiseProduct(spectrum.conjugate()).transpose();
    }
    return out;
}

DataMatrix apply_mask(const DataMatrix& data, const ObservationMask& mask) {
    const int m = static_cast<int>(data.values.rows());
    const int nf = static_cast<int>(data.values.cols());
    if (static_cast<int>(mask.missing_frequency_bins.size()) >= nf)
        throw InvalidArgument("apply_mask: at least one frequency bin must remain observed");
    if (static_cast<int>(mask.missing_pulse_rows.size()) >= m)
        throw InvalidArgument("apply_mask: at least one pulse must remain observed");

    DataMatrix out = data;
    for (int bin : mask.missing_frequency_bins) {
        if (bin < 0 || bin >= nf) throw InvalidArgument("apply_mask: frequency bin out of range");
        out.values.col(bin).setZero();
    }
    for (int row : mask.missing_pulse_rows) {
        if (row < 0 || row >= m) throw InvalidArgument("apply_mask: pulse row out of range");
        out.values.row(row).setZero();
    }
    // merge the mask so repeated application stays idempotent
    auto merge = [](std::vector<int> a, const std::vector<int>& b) {
        a.insert(a.end(), b.begin(), b.end());
        std::sort(a.begin(), a.end());
        a.erase(std::unique(a.begin(), a.end()), a.end());
        return a;
    };
    out.mask.missing_frequency_bins =
        merge(out.mask.missing_frequency_bins, mask.missing_frequency_bins);
    out.mask.missing_pulse_rows = merge(out.mask.missing_pulse_rows, mask.missing_pulse_rows);
    return out;
}

ObservationMask mask_from_bands(const std::vector<FrequencyBand>& bands, int frequency_bins) {
    ObservationMask mask;
    for (const FrequencyBand& band : bands) {
        const std::vector<int> grid = band_grid(band, frequency_bins);
        mask.missing_frequency_bins.insert(mask.missing_frequency_bins.end(), grid.begin(), grid.end());
    }
    std::sort(mask.missing_frequency_bins.begin(), mask.missing_frequency_bins.end());
    mask.missing_frequency_bins.erase(
        std::unique(mask.missing_frequency_bins.begin(), mask.missing_frequency_bins.end()),
        mask.missing_frequency_bins.end());
    if (static_cast<int>(mask.missing_frequency_bins.size()) >= frequency_bins)
        throw InvalidArgument("mask_from_bands: bands cover every frequency bin");
    return mask;
}

ObservationMask mask_from_dwell_fraction(double fraction, DwellPattern pattern, int pulses,
                                         std::uint64_t seed, int block_start) {
    if (!(fraction > 0.0 && fraction <= 1.0))
        throw InvalidArgument("mask_from_dwell_fraction: fraction must lie in (0, 1]");
    if (pulses < 1) throw InvalidArgument("mask_from_dwell_fraction: need at least one pulse");
    const int kept = static_cast<int>(std::floor(fraction * pulses));
    if (kept < 1) throw InvalidArgument("mask_from_dwell_fraction: fraction leaves no pulse observed");

    ObservationMask mask;
    const int missing = pulses - kept;
    if (missing == 0) return mask;

    switch (pattern) {
        case DwellPattern::periodic: {
            // Bresenham spread: keep row i when the running kept-count advances
            for (int i = 0; i < pulses; ++i) {
                const long long before = static_cast<long long>(i) * kept / pulses;
                const long long after = static_cast<long long>(i + 1) * kept / pulses;
                if (after == before) mask.missing_pulse_rows.push_back(i);
            }
            break;
        }
        case DwellPattern::block: {
            int start = block_start >= 0 ? block_start : (pulses - missing) / 2;
            start = std::clamp(start, 0, pulses - missing);
            for (int i = 0; i < missing; ++i) mask.missing_pulse_rows.push_back(start + i);
            break;
        }
        case DwellPattern::random: {
            std::vector<int> rows(static_cast<size_t>(pulses));
            for (int i = 0; i < pulses; ++i) rows[static_cast<size_t>(i)] = i;
            SubStream rng(seed, 0, 2);  // purpose 2: dwell masking
            for (int i = 0; i < missing; ++i) {
                const int j = i + static_cast<int>(rng.uniform() * (pulses - i));
                std::swap(rows[static_cast<size_t>(i)], rows[static_cast<size_t>(std::min(j, pulses - 1))]);
            }
            mask.missing_pulse_rows.assign(rows.begin(), rows.begin() + missing);
            std::sort(mask.missing_pulse_rows.begin(), mask.missing_pulse_rows.end());
            break;
        }
    }
    return mask;
}

std::vector<std::vector<int>> activity_windows(const std::vector<InterferenceSource>& sources,
                                               int pulses, double angle_step_deg) {
    if (pulses < 1) throw InvalidArgument("activity_windows: need at least one pulse");
    if (!(angle_step_deg > 0.0)) throw InvalidArgument("activity_windows: angle step must be positive");
    std::vector<std::vector<int>> active(static_cast<size_t>(pulses));
    for (size_t k = 0; k < sources.size(); ++k) {
        const auto& window = sources[k].activity_deg;
        for (int row = 0; row < pulses; ++row) {
            const double angle = row * angle_step_deg;
            const bool on = !window || (angle >= window->first && angle < window->second);
            if (on) active[static_cast<size_t>(row)].push_back(static_cast<int>(k));
        }
    }
    return active;
}

}  // namespace cisar
