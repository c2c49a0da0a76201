#include "cisar/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "cisar/fft.hpp"

namespace cisar {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

std::vector<double> make_window(Window window, int length) {
    if (length < 1) throw InvalidArgument("make_window: length must be >= 1");
    std::vector<double> w(static_cast<size_t>(length), 1.0);
    switch (window) {
        case Window::rectangular:
            break;
        case Window::hamming:
            for (int i = 0; i < length; ++i)
                w[static_cast<size_t>(i)] = 0.54 - 0.46 * std::cos(kTwoPi * i / length);
            break;
        case Window::blackman_harris: {
            // 4-term minimum-sidelobe coefficients, periodic convention
            const double a0 = 0.35875, a1 = 0.48829, a2 = 0.14128, a3 = 0.01168;
            for (int i = 0; i < length; ++i) {
                const double x = kTwoPi * i / length;
                w[static_cast<size_t>(i)] =
                    a0 - a1 * std::cos(x) + a2 * std::cos(2.0 * x) - a3 * std::cos(3.0 * x);
            }
            break;
        }
    }
    return w;
}

std::string window_name(Window window) {
    switch (window) {
        case Window::blackman_harris: return "blackman-harris";
        case Window::hamming: return "hamming";
        case Window::rectangular: return "rectangular";
    }
    return "unknown";
}

Window window_from_name(const std::string& name) {
    if (name == "blackman-harris" || name == "blackman_harris") return Window::blackman_harris;
    if (name == "hamming") return Window::hamming;
    if (name == "rectangular" || name == "rect") return Window::rectangular;
    throw InvalidArgument("unknown window: " + name);
}

WelchParams default_welch_params(int n) {
    // 3/10 of the record with 29/30 overlap (the classic 3000/2900 over a
    // 10000-sample sweep), capped there for longer records
    WelchParams p;
    p.segment_len = std::min(3000, std::max(8, (3 * n) / 10));
    p.segment_len = std::min(p.segment_len, n);
    p.overlap_len = (29 * p.segment_len) / 30;
    return p;
}

PsdEstimate welch_psd(const CVec& c, const WelchParams& params, const PsdEstimate* reference,
                      PsdReference norm) {
    validate_sequence(c, "welch_psd");
    const int n = static_cast<int>(c.size());
    if (params.segment_len < 1 || params.segment_len > n)
        throw InvalidArgument("welch_psd: segment length must lie in [1, N]");
    if (params.overlap_len < 0 || params.overlap_len >= params.segment_len)
        throw InvalidArgument("welch_psd: overlap must lie in [0, segment_len)");
    if (params.zero_pad_factor < 1) throw InvalidArgument("welch_psd: zero-pad factor must be >= 1");

    const int step = params.segment_len - params.overlap_len;
    const int segments = (n - params.segment_len) / step + 1;
    const std::vector<double> w = make_window(params.window, params.segment_len);
    double wss = 0.0;  // sum of squared window samples
    for (double v : w) wss += v * v;

    const size_t nfft =
        fft::next_pow2(static_cast<size_t>(params.segment_len)) * static_cast<size_t>(params.zero_pad_factor);

    PsdEstimate out;
    out.params = params;
    out.grid.resize(nfft);
    out.values.assign(nfft, 0.0);
    for (size_t k = 0; k < nfft; ++k) out.grid[k] = static_cast<double>(k) / static_cast<double>(nfft);

    std::vector<Complex> buf(nfft);
    for (int s = 0; s < segments; ++s) {
        const int off = s * step;
        std::fill(buf.begin(), buf.end(), Complex(0.0, 0.0));
        for (int i = 0; i < params.segment_len; ++i)
            buf[static_cast<size_t>(i)] = c(off + i) * w[static_cast<size_t>(i)];
        fft::forward(buf);
        for (size_t k = 0; k < nfft; ++k) out.values[k] += std::norm(buf[k]);
    }
    const double scale = 1.0 / (wss * segments);
    for (double& v : out.values) v *= scale;

    const std::vector<double>& ref = reference ? reference->values : out.values;
    double level = 0.0;
    if (norm == PsdReference::peak) {
        level = *std::max_element(ref.begin(), ref.end());
    } else {
        for (double v : ref) level += v;
        level /= static_cast<double>(ref.size());
    }
    if (!(level > 0.0)) throw InvalidArgument("welch_psd: reference level is not positive");
    out.reference_level = level;
    out.values_db.resize(nfft);
    for (size_t k = 0; k < nfft; ++k)
        out.values_db[k] = out.values[k] > 0.0 ? 10.0 * std::log10(out.values[k] / level) : kNegInf;
    return out;
}

AutocorrelationProfile autocorrelation(const CVec& c, int oversample) {
    validate_sequence(c, "autocorrelation");
    const int n = static_cast<int>(c.size());
    if (n < 2) throw InvalidArgument("autocorrelation: need at least 2 samples");
    if (oversample < 1 || !fft::is_pow2(static_cast<size_t>(oversample)))
        throw InvalidArgument("autocorrelation: oversample must be a power of two");

    // lag spectrum |C(nu)|^2 on an alias-free grid (r is supported in (-N, N))
    const size_t nfft = fft::next_pow2(static_cast<size_t>(2 * n));
    std::vector<Complex> buf(nfft, Complex(0.0, 0.0));
    for (int i = 0; i < n; ++i) buf[static_cast<size_t>(i)] = c(i);
    fft::forward(buf);
    for (Complex& x : buf) x = Complex(std::norm(x), 0.0);

    const size_t total = nfft * static_cast<size_t>(oversample);
    std::vector<Complex> fine;
    if (oversample == 1) {
        fine = std::move(buf);
    } else {
        // refine the lag grid: spectral zero-insertion with the Nyquist bin split
        fine.assign(total, Complex(0.0, 0.0));
        for (size_t k = 0; k < nfft / 2; ++k) fine[k] = buf[k];
        for (size_t k = nfft / 2 + 1; k < nfft; ++k) fine[total - nfft + k] = buf[k];
        fine[nfft / 2] = 0.5 * buf[nfft / 2];
        fine[total - nfft / 2] = 0.5 * buf[nfft / 2];
    }
    fft::inverse(fine);

    const double r0 = std::abs(fine[0]);
    if (!(r0 > 0.0)) throw InvalidArgument("autocorrelation: zero-energy sequence");

    AutocorrelationProfile profile;
    profile.length = n;
    profile.oversample = oversample;
    const int half = oversample * (n - 1);
    profile.magnitude_db.assign(static_cast<size_t>(2 * half + 1), 0.0);
    for (int m = 0; m <= half; ++m) {
        const double mag = std::abs(fine[static_cast<size_t>(m)]);
        const double db = mag > 0.0 ? 20.0 * std::log10(mag / r0) : kNegInf;
        profile.magnitude_db[static_cast<size_t>(half + m)] = db;
        profile.magnitude_db[static_cast<size_t>(half - m)] = db;  // conjugate symmetry
    }
    profile.magnitude_db[static_cast<size_t>(half)] = 0.0;
    return profile;
}

namespace {

/// Index (on the refined grid) of the first local minimum of the positive-lag
/// half, or -1 when the profile decays monotonically.
int mainlobe_edge(const AutocorrelationProfile& profile) {
    const int half = profile.center();
    for (int m = 1; m + 1 <= half; ++m) {
        const double prev = profile.at_index(m - 1);
        const double cur = profile.at_index(m);
        const double next = profile.at_index(m + 1);
        if (cur <= prev && cur < next) return m;
    }
    return -1;
}

}  // namespace

double psl(const AutocorrelationProfile& profile) {
    if (profile.length < 2 || profile.magnitude_db.size() < 3)
        throw InvalidArgument("psl: profile needs at least 3 lags");
    const int edge = mainlobe_edge(profile);
    if (edge < 0) return kNegInf;
    double peak = kNegInf;
    for (int m = edge + 1; m <= profile.center(); ++m) peak = std::max(peak, profile.at_index(m));
    return peak;
}

double mainlobe_width_3db(const AutocorrelationProfile& profile) {
    const int half = profile.center();
    const double target = std::pow(10.0, -3.0 / 20.0);  // amplitude at -3 dB
    for (int m = 1; m <= half; ++m) {
        const double cur_db = profile.at_index(m);
        if (cur_db >= -3.0) continue;
        const double prev = std::pow(10.0, profile.at_index(m - 1) / 20.0);
        const double cur = cur_db == kNegInf ? 0.0 : std::pow(10.0, cur_db / 20.0);
        const double frac = (prev - target) / (prev - cur);
        return 2.0 * (static_cast<double>(m - 1) + frac) / profile.oversample;
    }
    return 2.0 * static_cast<double>(profile.length - 1);  // never drops below -3 dB
}

double notch_depth(const PsdEstimate& psd, const FrequencyBand& band,
                   const std::vector<FrequencyBand>& exclude) {
    band.validate();
    auto in = [](const FrequencyBand& b, double f) { return f >= b.f_lo && f <= b.f_hi; };
    // Average in linear power: a dB average would be dominated by the deep
    // Welch rolloff at the sweep edges of a finite-duration reference.
    double band_sum = 0.0, rest_sum = 0.0;
    int band_count = 0, rest_count = 0;
    for (size_t k = 0; k < psd.grid.size(); ++k) {
        const double f = psd.grid[k];
        if (in(band, f)) {
            band_sum += psd.values[k];
            ++band_count;
            continue;
        }
        bool skipped = false;
        for (const FrequencyBand& other : exclude)
            if (in(other, f)) { skipped = true; break; }
        if (!skipped) {
            rest_sum += psd.values[k];
            ++rest_count;
        }
    }
    if (band_count == 0) throw InvalidArgument("notch_depth: band contains no PSD grid point");
    if (rest_count == 0) throw InvalidArgument("notch_depth: band covers the whole grid");
    if (!(band_sum > 0.0) || !(rest_sum > 0.0))
        throw InvalidArgument("notch_depth: zero average power");
    return 10.0 * std::log10((band_sum / band_count) / (rest_sum / rest_count));
}

}  // namespace cisar
