#include "cisar/signal.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace cisar {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

CVec steering_vector(double f, int n) {
    if (!(f >= 0.0 && f < 1.0)) throw InvalidArgument("steering_vector: f must lie in [0,1)");
    if (n < 1) throw InvalidArgument("steering_vector: length must be >= 1");
    CVec p(n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (int i = 0; i < n; ++i) {
        const double phase = -kTwoPi * f * static_cast<double>(i);
        p(i) = Complex(scale * std::cos(phase), scale * std::sin(phase));
    }
    return p;
}

CMat fourier_matrix(int n) {
    if (n < 1) throw InvalidArgument("fourier_matrix: order must be >= 1");
    CMat f(n, n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (int m = 0; m < n; ++m) {
        for (int k = 0; k < n; ++k) {
            // reduce m*k mod n first so the phase stays accurate for large n
            const long long prod = static_cast<long long>(m) * k % n;
            const double phase = -kTwoPi * static_cast<double>(prod) / n;
            f(m, k) = Complex(scale * std::cos(phase), scale * std::sin(phase));
        }
    }
    return f;
}

CVec dtft(const CVec& c, const std::vector<double>& freqs) {
    validate_sequence(c, "dtft");
    CVec out(static_cast<Eigen::Index>(freqs.size()));
    for (size_t k = 0; k < freqs.size(); ++k) {
        Complex acc(0.0, 0.0);
        for (Eigen::Index i = 0; i < c.size(); ++i) {
            const double phase = -kTwoPi * freqs[k] * static_cast<double>(i);
            acc += c(i) * Complex(std::cos(phase), std::sin(phase));
        }
        out(static_cast<Eigen::Index>(k)) = acc;
    }
    return out;
}

std::vector<int> band_grid(const FrequencyBand& band, int n) {
    band.validate();
    if (n < 1) throw InvalidArgument("band_grid: order must be >= 1");
    std::vector<int> grid;
    for (int i = 0; i < n; ++i) {
        const double f = static_cast<double>(i) / n;
        if (f >= band.f_lo && f <= band.f_hi) grid.push_back(i);
    }
    if (grid.empty())
        throw BandTooNarrow("band_grid: no grid frequency i/" + std::to_string(n) + " falls in [" +
                            std::to_string(band.f_lo) + ", " + std::to_string(band.f_hi) + "]");
    return grid;
}

ConstraintMatrix constraint_matrix(const FrequencyBand& band, int n) {
    const std::vector<int> grid = band_grid(band, n);
    // Columns are conjugated steering vectors so that c^H R c averages
    // |X(f_i)|^2 with X(f) = sum c(n) exp(-j 2 pi f n) -- the spectral-density
    // convention the PSD analysis and the scene simulator use. The plain DFT
    // columns would put the constraint on the mirrored band |X(-f_i)|^2.
    CMat q(n, static_cast<Eigen::Index>(grid.size()));
    for (size_t k = 0; k < grid.size(); ++k)
        q.col(static_cast<Eigen::Index>(k)) =
            steering_vector(static_cast<double>(grid[k]) / n, n).conjugate();
    ConstraintMatrix out;
    out.band = band;
    out.r = (q * q.adjoint()) / band.width();
    // enforce exact Hermitian symmetry against roundoff
    out.r = (out.r + out.r.adjoint().eval()) / 2.0;
    return out;
}

double band_energy(const CVec& c, const CMat& r) {
    if (c.size() != r.rows())
        throw DimensionMismatch("band_energy: sequence length " + std::to_string(c.size()) +
                                " vs constraint order " + std::to_string(r.rows()));
    const Complex v = c.dot(r * c);  // Eigen dot conjugates the left argument
    const double scale = std::max(1.0, std::abs(v.real()));
    if (std::abs(v.imag()) > 1e-10 * scale)
        throw Error("band_energy: Hermitian form has non-negligible imaginary part");
    return v.real();
}

double band_energy(const CVec& c, const ConstraintMatrix& constraint) {
    return band_energy(c, constraint.r);
}

double band_energy(const CVec& c, const FrequencyBand& band) {
    validate_sequence(c, "band_energy");
    const int n = static_cast<int>(c.size());
    const std::vector<int> grid = band_grid(band, n);
    const double scale = 1.0 / static_cast<double>(n);
    double acc = 0.0;
    for (int i : grid) {
        const double f = static_cast<double>(i) / n;
        Complex proj(0.0, 0.0);  // X(f_i) = sum c(n) exp(-j 2 pi f n)
        for (int k = 0; k < n; ++k) {
            const double phase = -kTwoPi * f * static_cast<double>(k);
            proj += c(k) * Complex(std::cos(phase), std::sin(phase));
        }
        acc += std::norm(proj) * scale;
    }
    return acc / band.width();
}

std::vector<BandCompliance> check_constraints(const CVec& c, const std::vector<FrequencyBand>& bands) {
    validate_sequence(c, "check_constraints");
    std::vector<BandCompliance> report;
    report.reserve(bands.size());
    for (const FrequencyBand& band : bands) {
        BandCompliance rec;
        rec.band = band;
        rec.budget = band.energy_budget;
        rec.energy = band_energy(c, band);
        rec.satisfied = rec.energy <= rec.budget * (1.0 + kBudgetSlackRel);
        rec.margin_db = rec.energy > 0.0 ? 10.0 * std::log10(rec.budget / rec.energy)
                                         : std::numeric_limits<double>::infinity();
        report.push_back(rec);
    }
    return report;
}

double budget_from_depth(double depth_db, double reference_energy) {
    if (depth_db < 0.0) throw InvalidArgument("budget_from_depth: depth must be nonnegative");
    if (!(reference_energy > 0.0)) throw InvalidArgument("budget_from_depth: reference energy must be positive");
    return std::pow(10.0, -depth_db / 10.0) * reference_energy;
}

FrequencyBand normalized_band(double f1_hz, double f2_hz, double radar_lo_hz, double bandwidth_hz,
                              double depth_db, double energy_budget) {
    if (!(bandwidth_hz > 0.0)) throw InvalidArgument("normalized_band: bandwidth must be positive");
    FrequencyBand band;
    band.f_lo = (f1_hz - radar_lo_hz) / bandwidth_hz;
    band.f_hi = (f2_hz - radar_lo_hz) / bandwidth_hz;
    band.depth_db = depth_db;
    band.energy_budget = energy_budget;
    band.validate();
    return band;
}

CVec chirp_reference(int n, double band_fraction) {
    if (n < 2) throw InvalidArgument("chirp_reference: length must be >= 2");
    if (!(band_fraction > 0.0 && band_fraction <= 1.0))
        throw InvalidArgument("chirp_reference: band fraction must lie in (0,1]");
    const double f_start = 0.5 * (1.0 - band_fraction);
    const double rate = band_fraction / n;  // sweep rate per sample
    const double amp = 1.0 / std::sqrt(static_cast<double>(n));
    CVec c(n);
    for (int i = 0; i < n; ++i) {
        const double k = static_cast<double>(i);
        const double phase = kTwoPi * (f_start * k + 0.5 * rate * k * k);
        c(i) = Complex(amp * std::cos(phase), amp * std::sin(phase));
    }
    return c;
}

}  // namespace cisar
