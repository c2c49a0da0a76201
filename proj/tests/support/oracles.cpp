#include "support/oracles.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

namespace cisar::test {

std::vector<Complex> naive_dft(const std::vector<Complex>& x, bool inverse) {
    const size_t n = x.size();
    const double sign = inverse ? 1.0 : -1.0;
    std::vector<Complex> out(n, Complex(0.0, 0.0));
    for (size_t k = 0; k < n; ++k) {
        for (size_t i = 0; i < n; ++i) {
            const double phase = sign * 2.0 * std::numbers::pi * static_cast<double>(k * i % n) /
                                 static_cast<double>(n);
            out[k] += x[i] * Complex(std::cos(phase), std::sin(phase));
        }
        if (inverse) out[k] /= static_cast<double>(n);
    }
    return out;
}

double QuadSet::value(const CVec& x) const {
    double v = d + std::real(x.dot(a * x));
    if (b.size() > 0) v += 2.0 * std::real(b.dot(x));
    return v;
}

Projector::Projector(const QuadSet& set) {
    Eigen::SelfAdjointEigenSolver<CMat> eig(set.a);
    basis_ = eig.eigenvectors();
    evals_ = eig.eigenvalues();
    b_ = set.b.size() > 0 ? set.b : CVec(CVec::Zero(set.a.rows()));
    b_eig_ = basis_.adjoint() * b_;
    d_ = set.d;
}

CVec Projector::operator()(const CVec& y) const {
    const CVec y_eig = basis_.adjoint() * y;

    // constraint value along the KKT path, evaluated in the eigenbasis (O(n))
    auto value_at = [&](double mu, CVec* point_eig) -> double {
        double v = d_;
        for (Eigen::Index i = 0; i < evals_.size(); ++i) {
            const Complex xi = (y_eig(i) - mu * b_eig_(i)) / (1.0 + mu * evals_(i));
            v += evals_(i) * std::norm(xi) + 2.0 * std::real(std::conj(b_eig_(i)) * xi);
            if (point_eig) (*point_eig)(i) = xi;
        }
        return v;
    };

    if (value_at(0.0, nullptr) <= 0.0) return y;

    double hi = 1.0;
    int doublings = 0;
    while (value_at(hi, nullptr) > 0.0) {
        hi *= 2.0;
        if (++doublings > 400) throw Error("Projector: constraint set appears empty");
    }
    double lo = hi * 0.5 > 1.0 ? hi * 0.5 : 0.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (value_at(mid, nullptr) > 0.0) lo = mid;
        else hi = mid;
    }
    CVec x_eig(evals_.size());
    value_at(hi, &x_eig);
    return basis_ * x_eig;
}

DykstraResult dykstra_project(const CVec& y, const std::vector<QuadSet>& sets, int max_iterations,
                              double tol) {
    DykstraResult result;
    CVec x = y;
    std::vector<CVec> corrections(sets.size(), CVec::Zero(y.size()));
    std::vector<Projector> projectors;
    projectors.reserve(sets.size());
    for (const QuadSet& set : sets) projectors.emplace_back(set);

    for (int it = 0; it < max_iterations; ++it) {
        const CVec prev = x;
        for (size_t i = 0; i < sets.size(); ++i) {
            const CVec z = x + corrections[i];
            const CVec projected = projectors[i](z);
            corrections[i] = z - projected;
            x = projected;
        }
        result.iterations = it + 1;
        if ((x - prev).norm() <= tol * (1.0 + x.norm())) break;
    }

    result.x = x;
    result.objective = (x - y).squaredNorm();
    result.max_violation = 0.0;
    for (const QuadSet& set : sets) result.max_violation = std::max(result.max_violation, set.value(x));
    return result;
}

std::uint64_t TestRng::next() {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return state;
}

double TestRng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double TestRng::normal() {
    const double u = std::max(uniform(), 1e-300);
    const double v = uniform();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
}

Complex TestRng::complex_gaussian() {
    return Complex(normal() / std::sqrt(2.0), normal() / std::sqrt(2.0));
}

CVec TestRng::complex_vector(int n) {
    CVec out(n);
    for (int i = 0; i < n; ++i) out(i) = complex_gaussian();
    return out;
}

CMat TestRng::complex_matrix(int rows, int cols) {
    CMat out(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) out(r, c) = complex_gaussian();
    return out;
}

}  // namespace cisar::test
