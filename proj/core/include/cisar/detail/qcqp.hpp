#pragma once

#include <utility>
#include <vector>

#include "cisar/types.hpp"

namespace cisar {
struct SolverOptions;
}

namespace cisar::detail {

/// One convex quadratic constraint f(z) = z'Mz + q'z + r <= 0 over real z.
/// Coordinate balls (M = identity restricted to index ranges) are kept
/// implicit so block-energy constraints cost O(n) instead of O(n^2).
struct QuadForm {
    RMat m;                                       // dense PSD part; empty for balls
    std::vector<std::pair<int, int>> ball_ranges; // (offset, count) pairs, used when m is empty
    RVec q;                                       // empty means zero
    double r = 0.0;

    bool is_ball() const { return m.size() == 0; }
    double value(const RVec& z) const;
    RVec grad(const RVec& z) const;
};

struct BarrierReport {
    RVec z;
    std::vector<double> dual;
    double objective = 0.0;      // ||z - z0||^2 at the returned point
    double certified_gap = 0.0;  // f0(z) - g(dual), a rigorous duality gap
    double kkt_residual = 0.0;   // dimensionless max of gap/stationarity/slackness terms
    int newton_iterations = 0;
    std::vector<std::vector<double>> stage_merits;  // barrier merit per Newton step, per stage
};

/// Minimize ||z - z0||^2 subject to the given constraints with a log-barrier
/// interior-point method (Newton centering, backtracking line search).
/// `z_start` must be strictly feasible. Terminates once the certified duality
/// gap meets gap_rel * max(|objective|, gap_floor).
BarrierReport barrier_solve(const RVec& z0, const std::vector<QuadForm>& constraints,
                            const RVec& z_start, const SolverOptions& options);

/// Real lift of complex vectors/Hermitian forms: z = [Re c; Im c], and
/// c^H R c = z' lift_hermitian(R) z for Hermitian R.
RVec lift(const CVec& c);
CVec unlift(const RVec& z);
RMat lift_hermitian(const CMat& r);
/// 2*Re(w^H c) = lift_linear(w)' z.
RVec lift_linear(const CVec& w);

}  // namespace cisar::detail
