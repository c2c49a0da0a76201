#pragma once

#include <vector>

#include "cisar/signal.hpp"
#include "cisar/types.hpp"

namespace cisar {

struct SolverOptions {
    /// Relative slack accepted on budgets and energy bounds.
    double feasibility_tol = 1e-9;
    /// Certified duality gap target, relative to max(|objective|, gap_floor).
    double gap_rel = 1e-6;
    double gap_floor = 5e-2;
    double barrier_mu = 30.0;  ///< barrier parameter growth per stage
    double t_init = 1.0;
    int max_stages = 64;
    int max_newton_per_stage = 80;
    /// Largest complex dimension accepted for a dense solve.
    int dense_cap = 4096;
    /// Record per-stage Newton merit values in the solve info.
    bool record_merit_trace = false;
};

struct BlockSolveInfo {
    int block_index = 0;  ///< 1-based, matching the partition order
    int offset = 0;       ///< start of the optimized segment in the output
    int length = 0;       ///< optimized segment length
    int newton_iterations = 0;
    double objective = 0.0;  ///< ||segment - reference segment||^2
    double kkt_residual = 0.0;
    bool closed_form = false;  ///< feasible-reference or ball-projection path
    std::vector<std::vector<double>> stage_merits;
};

struct DesignProblem {
    CVec reference;                   ///< c0, typically unit energy
    std::vector<FrequencyBand> bands; ///< emitter bands with budgets
    int block_size = 0;               ///< N-bar
    int overlap = 0;                  ///< W in [0, block_size/2]
    SolverOptions solver;

    int length() const { return static_cast<int>(reference.size()); }
    int block_count() const;  ///< L = ceil(N / block_size)
    void validate() const;
};

struct DesignSolution {
    CVec c;
    double objective = 0.0;  ///< ||c - c0||^2
    /// Energies of the constrained windows: the L aligned blocks for the full
    /// solve, the overlapped optimization windows for the block design.
    std::vector<double> block_energies;
    /// Full-length band energies of the assembled waveform (informative; the
    /// block design enforces budgets per window, not at full length).
    std::vector<double> band_energies;
    double kkt_residual = 0.0;  ///< worst case over interior-point solves
    int iterations = 0;         ///< total Newton iterations
    std::vector<BlockSolveInfo> blocks;
};

/// Solve the joint design problem at full length N = L * block_size:
/// minimize ||c - c0||^2 subject to per-block energies <= 1/L and band
/// energies <= budgets. Certified to the configured optimality gap.
DesignSolution solve_qcqp_full(const DesignProblem& problem);

/// First-block problem: minimize ||c1 - segment||^2 with ||c1||^2 <= energy_bound
/// and c1^H R_k c1 <= budgets[k]. Constraint matrices must match the segment order.
CVec solve_block_first(const CVec& segment, const std::vector<ConstraintMatrix>& constraints,
                       const std::vector<double>& budgets, double energy_bound,
                       const SolverOptions& options, BlockSolveInfo* info = nullptr);

/// Overlapped-block problem: optimize the new samples while the constraints see
/// the concatenation [prev_tail; new]. Constraint matrices are built at order
/// tail_len + segment_len. Throws Infeasible when the fixed tail alone exhausts
/// a budget.
CVec solve_block_overlap(const CVec& prev_tail, const CVec& segment,
                         const std::vector<ConstraintMatrix>& constraints,
                         const std::vector<double>& budgets, double energy_bound,
                         const SolverOptions& options, BlockSolveInfo* info = nullptr);

/// Sequential overlapped block design: one full-size block solve followed by
/// ceil((N - block_size)/(block_size - overlap)) overlap solves, each seeing
/// the tail of the signal designed so far. The trailing segment is shortened
/// so the output length equals the reference length exactly.
DesignSolution design_waveform(const DesignProblem& problem);

}  // namespace cisar
