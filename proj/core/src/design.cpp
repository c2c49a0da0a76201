#include "cisar/design.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>

#include "cisar/detail/qcqp.hpp"

namespace cisar {

namespace {

using detail::QuadForm;

bool finite_budget(double b) { return std::isfinite(b); }

/// Largest beta from a geometric ladder such that every constraint value
/// v_k(beta) = a_k + b_k*beta + c_k*beta^2 stays at or below 90% of its bound.
/// Falls back to 0 (feasible by precondition) when no ladder point qualifies.
double pick_start_scale(const std::vector<std::array<double, 3>>& coeffs,
                        const std::vector<double>& bounds) {
    double beta = 1.0;
    for (int step = 0; step < 50; ++step, beta *= 0.5) {
        bool ok = true;
        for (size_t k = 0; k < coeffs.size(); ++k) {
            const auto& [a, b, c] = coeffs[k];
            if (a + b * beta + c * beta * beta > 0.9 * bounds[k]) { ok = false; break; }
        }
        if (ok) return beta;
    }
    return 0.0;
}

void fill_info(BlockSolveInfo* info, const detail::BarrierReport& report, double objective) {
    if (!info) return;
    info->newton_iterations = report.newton_iterations;
    info->objective = objective;
    info->kkt_residual = report.kkt_residual;
    info->closed_form = false;
    info->stage_merits = report.stage_merits;
}

void fill_closed_form(BlockSolveInfo* info, double objective) {
    if (!info) return;
    info->newton_iterations = 0;
    info->objective = objective;
    info->kkt_residual = 0.0;
    info->closed_form = true;
    info->stage_merits.clear();
}

/// Barrier Phase-I on an epigraph variable: minimize pressure on s subject to
/// f_k(z) <= s. Returns a strictly feasible z for the original constraints or
/// throws Infeasible naming the worst constraint.
RVec phase_one_start(const std::vector<QuadForm>& forms, const std::vector<double>& bounds,
                     const std::vector<int>& constraint_ids, const RVec& z_anchor,
                     const SolverOptions& options) {
    const Eigen::Index n = z_anchor.size();
    std::vector<QuadForm> ext;
    ext.reserve(forms.size());
    for (const QuadForm& f : forms) {
        QuadForm e;
        if (f.is_ball()) {
            e.ball_ranges = f.ball_ranges;
        } else {
            e.m = RMat::Zero(n + 1, n + 1);
            e.m.topLeftCorner(n, n) = f.m;
        }
        e.q = RVec::Zero(n + 1);
        if (f.q.size() > 0) e.q.head(n) = f.q;
        e.q(n) = -1.0;
        e.r = f.r;
        ext.push_back(std::move(e));
    }

    double worst = 0.0;
    for (const QuadForm& f : forms) worst = std::max(worst, f.value(z_anchor));
    const double scale = *std::max_element(bounds.begin(), bounds.end());
    const double s0 = 1.1 * worst + 0.01 * scale + 1e-12;
    const double pull = 10.0 * (s0 + scale) + 1.0;

    RVec start(n + 1), target(n + 1);
    start << z_anchor, s0;
    target << z_anchor, -pull;

    SolverOptions popt = options;
    popt.gap_rel = 1e-3;
    popt.gap_floor = 1.0;
    const detail::BarrierReport report = detail::barrier_solve(target, ext, start, popt);

    const double min_bound = *std::min_element(bounds.begin(), bounds.end());
    if (report.z(n) <= -1e-9 * min_bound) return report.z.head(n);

    size_t worst_k = 0;
    double worst_v = -std::numeric_limits<double>::infinity();
    for (size_t k = 0; k < forms.size(); ++k) {
        const double v = forms[k].value(report.z.head(n)) / bounds[k];
        if (v > worst_v) { worst_v = v; worst_k = k; }
    }
    throw Infeasible("no strictly feasible point: the fixed tail exhausts constraint " +
                         std::to_string(constraint_ids[worst_k]),
                     constraint_ids[worst_k]);
}

}  // namespace

int DesignProblem::block_count() const {
    return static_cast<int>((length() + block_size - 1) / block_size);
}

void DesignProblem::validate() const {
    validate_sequence(reference, "DesignProblem");
    if (block_size < 1 || block_size > length())
        throw InvalidArgument("DesignProblem: block size must lie in [1, N]");
    if (overlap < 0 || 2 * overlap > block_size)
        throw InvalidArgument("DesignProblem: overlap must lie in [0, block_size/2]");
    for (const FrequencyBand& band : bands) band.validate();
}

CVec solve_block_first(const CVec& segment, const std::vector<ConstraintMatrix>& constraints,
                       const std::vector<double>& budgets, double energy_bound,
                       const SolverOptions& options, BlockSolveInfo* info) {
    validate_sequence(segment, "solve_block_first");
    if (constraints.size() != budgets.size())
        throw DimensionMismatch("solve_block_first: one budget per constraint expected");
    const int n = static_cast<int>(segment.size());
    for (const ConstraintMatrix& cm : constraints)
        if (cm.order() != n) throw DimensionMismatch("solve_block_first: constraint order mismatch");
    if (!(energy_bound > 0.0)) throw InvalidArgument("solve_block_first: energy bound must be positive");
    if (n > options.dense_cap)
        throw SizeLimit("solve_block_first: dimension " + std::to_string(n) + " exceeds the dense-solve cap");
    if (info) info->length = n;

    std::vector<size_t> active;  // finite-budget bands
    for (size_t k = 0; k < budgets.size(); ++k) {
        if (!finite_budget(budgets[k])) continue;
        if (!(budgets[k] > 0.0)) throw InvalidArgument("solve_block_first: budgets must be positive");
        active.push_back(k);
    }

    const double ball_value = segment.squaredNorm();
    std::vector<double> band_values(active.size());
    bool feasible = ball_value <= energy_bound * (1.0 + options.feasibility_tol);
    for (size_t i = 0; i < active.size(); ++i) {
        band_values[i] = band_energy(segment, constraints[active[i]]);
        feasible = feasible && band_values[i] <= budgets[active[i]] * (1.0 + options.feasibility_tol);
    }
    if (feasible) {  // the unconstrained minimizer is feasible
        fill_closed_form(info, 0.0);
        return segment;
    }

    if (active.empty()) {  // Euclidean projection onto the energy ball
        const CVec out = segment * std::sqrt(energy_bound / ball_value);
        fill_closed_form(info, (out - segment).squaredNorm());
        return out;
    }

    std::vector<QuadForm> forms;
    std::vector<std::array<double, 3>> coeffs;
    std::vector<double> bounds;
    forms.reserve(active.size() + 1);
    for (size_t i = 0; i < active.size(); ++i) {
        QuadForm f;
        f.m = detail::lift_hermitian(constraints[active[i]].r);
        f.r = -budgets[active[i]];
        forms.push_back(std::move(f));
        coeffs.push_back({0.0, 0.0, band_values[i]});
        bounds.push_back(budgets[active[i]]);
    }
    {
        QuadForm ball;
        ball.ball_ranges = {{0, n}, {n, n}};
        ball.r = -energy_bound;
        forms.push_back(std::move(ball));
        coeffs.push_back({0.0, 0.0, ball_value});
        bounds.push_back(energy_bound);
    }

    const RVec z0 = detail::lift(segment);
    const double beta = pick_start_scale(coeffs, bounds);
    const detail::BarrierReport report = detail::barrier_solve(z0, forms, beta * z0, options);
    fill_info(info, report, report.objective);
    return detail::unlift(report.z);
}

CVec solve_block_overlap(const CVec& prev_tail, const CVec& segment,
                         const std::vector<ConstraintMatrix>& constraints,
                         const std::vector<double>& budgets, double energy_bound,
                         const SolverOptions& options, BlockSolveInfo* info) {
    if (prev_tail.size() == 0)
        return solve_block_first(segment, constraints, budgets, energy_bound, options, info);
    validate_sequence(segment, "solve_block_overlap");
    validate_sequence(prev_tail, "solve_block_overlap tail");
    if (constraints.size() != budgets.size())
        throw DimensionMismatch("solve_block_overlap: one budget per constraint expected");
    const int nt = static_cast<int>(prev_tail.size());
    const int ns = static_cast<int>(segment.size());
    const int order = nt + ns;
    for (const ConstraintMatrix& cm : constraints)
        if (cm.order() != order)
            throw DimensionMismatch("solve_block_overlap: constraints must match the concatenated length");
    if (!(energy_bound > 0.0)) throw InvalidArgument("solve_block_overlap: energy bound must be positive");
    if (order > options.dense_cap)
        throw SizeLimit("solve_block_overlap: dimension exceeds the dense-solve cap");
    if (info) info->length = ns;

    std::vector<size_t> active;
    for (size_t k = 0; k < budgets.size(); ++k) {
        if (!finite_budget(budgets[k])) continue;
        if (!(budgets[k] > 0.0)) throw InvalidArgument("solve_block_overlap: budgets must be positive");
        active.push_back(k);
    }

    const double tail_energy = prev_tail.squaredNorm();
    // The energy ball is the one constraint whose minimum over the free
    // samples is attained at zero, so the tail alone decides feasibility.
    if (tail_energy > energy_bound * (1.0 + options.feasibility_tol))
        throw Infeasible("solve_block_overlap: previous tail already exceeds the energy bound",
                         static_cast<int>(budgets.size()));
    if (tail_energy >= energy_bound)
        throw Infeasible("solve_block_overlap: previous tail leaves no energy margin",
                         static_cast<int>(budgets.size()));

    if (active.empty()) {  // ball projection with the radius left by the tail
        const double radius2 = energy_bound - tail_energy;
        const double seg_energy = segment.squaredNorm();
        if (seg_energy <= radius2 * (1.0 + options.feasibility_tol)) {
            fill_closed_form(info, 0.0);
            return segment;
        }
        const CVec out = segment * std::sqrt(radius2 / seg_energy);
        fill_closed_form(info, (out - segment).squaredNorm());
        return out;
    }

    std::vector<double> bounds;
    std::vector<QuadForm> forms;
    std::vector<int> constraint_ids;
    CMat anchor_lhs = CMat::Identity(ns, ns) / energy_bound;
    CVec anchor_rhs = CVec::Zero(ns);
    for (size_t i = 0; i < active.size(); ++i) {
        const CMat& r = constraints[active[i]].r;
        const CMat r22 = r.bottomRightCorner(ns, ns);
        const CVec w = r.topRightCorner(nt, ns).adjoint() * prev_tail;
        const double a = std::real(prev_tail.dot(r.topLeftCorner(nt, nt) * prev_tail));
        const double budget = budgets[active[i]];
        QuadForm f;
        f.m = detail::lift_hermitian(r22);
        f.q = detail::lift_linear(w);
        f.r = a - budget;
        forms.push_back(std::move(f));
        bounds.push_back(budget);
        constraint_ids.push_back(static_cast<int>(active[i]));
        anchor_lhs += r22 / budget;
        anchor_rhs -= w / budget;
    }
    {
        QuadForm ball;
        ball.ball_ranges = {{0, ns}, {ns, ns}};
        ball.r = tail_energy - energy_bound;
        forms.push_back(std::move(ball));
        bounds.push_back(energy_bound);
        constraint_ids.push_back(static_cast<int>(budgets.size()));
    }

    auto strictly_feasible = [&](const RVec& z, double margin) {
        for (size_t k = 0; k < forms.size(); ++k)
            if (forms[k].value(z) > -margin * bounds[k]) return false;
        return true;
    };

    // unchanged-segment shortcut
    const RVec z0 = detail::lift(segment);
    {
        bool ok = true;
        for (size_t k = 0; k < forms.size(); ++k)
            if (forms[k].value(z0) > options.feasibility_tol * bounds[k]) { ok = false; break; }
        if (ok) {
            fill_closed_form(info, 0.0);
            return segment;
        }
    }

    // Strictly feasible start. The tail is fixed, so scaling the reference
    // segment down need not reach feasibility (its zero-padded band energy can
    // sit above a tight budget even though feasible continuations exist).
    // Candidates: the scaled reference ladder, then a blend toward the "quiet
    // continuation" minimizing the budget-weighted constraint sum, then a
    // barrier Phase-I on an epigraph variable as the general fallback.
    const CVec anchor = Eigen::LLT<CMat>(anchor_lhs).solve(anchor_rhs);
    const RVec z_anchor = detail::lift(anchor);
    RVec z_start;
    bool found = false;
    for (double margin : {0.1, 1e-3, 1e-9}) {
        for (int step = 0; step <= 40 && !found; ++step) {
            const double beta = step == 40 ? 0.0 : std::pow(0.5, step);
            if (strictly_feasible(beta * z0, margin)) {
                z_start = beta * z0;
                found = true;
            } else if (strictly_feasible(beta * z0 + (1.0 - beta) * z_anchor, margin)) {
                z_start = beta * z0 + (1.0 - beta) * z_anchor;
                found = true;
            }
        }
        if (found) break;
    }
    if (!found) {
        z_start = phase_one_start(forms, bounds, constraint_ids, z_anchor, options);
    }

    const detail::BarrierReport report = detail::barrier_solve(z0, forms, z_start, options);
    fill_info(info, report, report.objective);
    return detail::unlift(report.z);
}

DesignSolution solve_qcqp_full(const DesignProblem& problem) {
    problem.validate();
    const int n = problem.length();
    const int nb = problem.block_size;
    if (n % nb != 0)
        throw InvalidArgument("solve_qcqp_full: length must be an integer number of blocks");
    const int blocks = n / nb;
    const double bound = 1.0 / blocks;
    const SolverOptions& opt = problem.solver;
    if (n > opt.dense_cap)
        throw SizeLimit("solve_qcqp_full: length " + std::to_string(n) + " exceeds the dense-solve cap");

    DesignSolution sol;
    sol.blocks.resize(1);
    BlockSolveInfo& info = sol.blocks.front();
    info.block_index = 1;
    info.offset = 0;
    info.length = n;

    std::vector<double> band_values(problem.bands.size());
    bool feasible = true;
    for (size_t k = 0; k < problem.bands.size(); ++k) {
        band_values[k] = band_energy(problem.reference, problem.bands[k]);
        feasible = feasible &&
                   band_values[k] <= problem.bands[k].energy_budget * (1.0 + opt.feasibility_tol);
    }
    std::vector<double> block_values(static_cast<size_t>(blocks));
    for (int l = 0; l < blocks; ++l) {
        block_values[static_cast<size_t>(l)] = problem.reference.segment(l * nb, nb).squaredNorm();
        feasible = feasible && block_values[static_cast<size_t>(l)] <= bound * (1.0 + opt.feasibility_tol);
    }

    if (feasible) {
        sol.c = problem.reference;
        fill_closed_form(&info, 0.0);
    } else if (problem.bands.empty()) {
        // separable: project each block onto its energy ball
        sol.c = problem.reference;
        for (int l = 0; l < blocks; ++l) {
            const double e = block_values[static_cast<size_t>(l)];
            if (e > bound) sol.c.segment(l * nb, nb) *= std::sqrt(bound / e);
        }
        fill_closed_form(&info, (sol.c - problem.reference).squaredNorm());
    } else {
        std::vector<QuadForm> forms;
        std::vector<std::array<double, 3>> coeffs;
        std::vector<double> bounds;
        for (size_t k = 0; k < problem.bands.size(); ++k) {
            QuadForm f;
            f.m = detail::lift_hermitian(constraint_matrix(problem.bands[k], n).r);
            f.r = -problem.bands[k].energy_budget;
            forms.push_back(std::move(f));
            coeffs.push_back({0.0, 0.0, band_values[k]});
            bounds.push_back(problem.bands[k].energy_budget);
        }
        for (int l = 0; l < blocks; ++l) {
            QuadForm ball;
            ball.ball_ranges = {{l * nb, nb}, {n + l * nb, nb}};
            ball.r = -bound;
            forms.push_back(std::move(ball));
            coeffs.push_back({0.0, 0.0, block_values[static_cast<size_t>(l)]});
            bounds.push_back(bound);
        }
        const RVec z0 = detail::lift(problem.reference);
        const double beta = pick_start_scale(coeffs, bounds);
        const detail::BarrierReport report = detail::barrier_solve(z0, forms, beta * z0, opt);
        sol.c = detail::unlift(report.z);
        fill_info(&info, report, report.objective);
    }

    sol.objective = (sol.c - problem.reference).squaredNorm();
    sol.kkt_residual = info.kkt_residual;
    sol.iterations = info.newton_iterations;
    for (int l = 0; l < blocks; ++l)
        sol.block_energies.push_back(sol.c.segment(l * nb, nb).squaredNorm());
    for (const FrequencyBand& band : problem.bands)
        sol.band_energies.push_back(band_energy(sol.c, band));
    return sol;
}

DesignSolution design_waveform(const DesignProblem& problem) {
    problem.validate();
    const int n = problem.length();
    const int nb = problem.block_size;
    const int w = problem.overlap;
    const int blocks = problem.block_count();
    const double bound = 1.0 / blocks;
    const SolverOptions& opt = problem.solver;

    std::vector<double> budgets;
    for (const FrequencyBand& band : problem.bands) budgets.push_back(band.energy_budget / blocks);

    const int step = nb - w;
    const int extra = n == nb ? 0 : static_cast<int>((n - nb + step - 1) / step);

    // constraint matrices per distinct window order
    std::map<int, std::vector<ConstraintMatrix>> cache;
    auto constraints_at = [&](int order) -> const std::vector<ConstraintMatrix>& {
        auto it = cache.find(order);
        if (it == cache.end()) {
            std::vector<ConstraintMatrix> cms;
            for (const FrequencyBand& band : problem.bands) cms.push_back(constraint_matrix(band, order));
            it = cache.emplace(order, std::move(cms)).first;
        }
        return it->second;
    };

    DesignSolution sol;
    sol.c = CVec::Zero(n);

    auto annotate = [](int block, const char* what) {
        return "design_waveform: block " + std::to_string(block) + ": " + what;
    };

    {
        BlockSolveInfo info;
        info.block_index = 1;
        info.offset = 0;
        try {
            sol.c.head(nb) = solve_block_first(problem.reference.head(nb), constraints_at(nb), budgets,
                                               bound, opt, &info);
        } catch (const Infeasible& e) {
            throw Infeasible(annotate(1, e.what()), e.constraint_index);
        } catch (const BandTooNarrow& e) {
            throw BandTooNarrow(annotate(1, e.what()));
        }
        sol.block_energies.push_back(sol.c.head(nb).squaredNorm());
        sol.blocks.push_back(std::move(info));
    }

    for (int l = 2; l <= extra + 1; ++l) {
        const int start = nb + (l - 2) * step;
        const int len = std::min(step, n - start);
        BlockSolveInfo info;
        info.block_index = l;
        info.offset = start;
        try {
            const CVec tail = w > 0 ? sol.c.segment(start - w, w).eval() : CVec();
            sol.c.segment(start, len) =
                solve_block_overlap(tail, problem.reference.segment(start, len), constraints_at(w + len),
                                    budgets, bound, opt, &info);
        } catch (const Infeasible& e) {
            throw Infeasible(annotate(l, e.what()), e.constraint_index);
        } catch (const BandTooNarrow& e) {
            throw BandTooNarrow(annotate(l, e.what()));
        }
        sol.block_energies.push_back(sol.c.segment(start - w, w + len).squaredNorm());
        sol.blocks.push_back(std::move(info));
    }

    sol.objective = (sol.c - problem.reference).squaredNorm();
    sol.kkt_residual = 0.0;
    sol.iterations = 0;
    for (const BlockSolveInfo& info : sol.blocks) {
        sol.kkt_residual = std::max(sol.kkt_residual, info.kkt_residual);
        sol.iterations += info.newton_iterations;
    }
    for (const FrequencyBand& band : problem.bands)
        sol.band_energies.push_back(band_energy(sol.c, band));
    return sol;
}

}  // namespace cisar
