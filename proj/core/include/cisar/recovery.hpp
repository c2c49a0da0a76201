#pragma once

#include <vector>

#include "cisar/types.hpp"

namespace cisar {

/// Scaled DFT matrix with the rows of the missing indices zeroed. Because the
/// surviving rows stay orthonormal, the Moore-Penrose pseudoinverse is simply
/// the adjoint, and lambda_max(op^H op) is 1 whenever any row survives.
struct UndercompleteOperator {
    int order = 0;
    std::vector<int> missing;
    CMat matrix;  ///< zero-rowed scaled DFT
    CMat pinv;    ///< adjoint of `matrix`

    bool complete() const { return missing.empty(); }
    double gram_spectral_norm() const { return static_cast<int>(missing.size()) < order ? 1.0 : 0.0; }
};

UndercompleteOperator undercomplete_operator(int order, const std::vector<int>& missing);

/// ||S - Ox * I * Oy^H||_F^2, the data-consistency displacement of an image
/// against the observed matrix.
double displacement(const CMat& s, const UndercompleteOperator& op_x,
                    const UndercompleteOperator& op_y, const CMat& image);

struct Sl0Params {
    double sigma_min = 1e-6;
    double sigma_decay = 0.6;   ///< geometric decay per outer iteration
    double step = 2.0;          ///< gradient step size
    int inner_iterations = 15;
};

struct RecoveryTraceRow {
    int iteration = 0;
    double objective = 0.0;
    double shannon_rank = 0.0;
    double residual = 0.0;  ///< Frobenius norm of the data mismatch
};

/// Two-dimensional smoothed-l0 recovery: starting from the pseudoinverse
/// image, alternate Gaussian-weighted shrinkage of small entries with a
/// projection back onto the observed data, while the smoothing width sigma
/// decays geometrically from 2*max|I| to sigma_min. The trace records the
/// smoothed-l0 measure as the objective.
CMat sl0_recover(const CMat& s, const UndercompleteOperator& op_x, const UndercompleteOperator& op_y,
                 const Sl0Params& params, std::vector<RecoveryTraceRow>* trace = nullptr);

struct RmParams {
    double lambda = 0.0;  ///< nuclear-norm weight
    double tau = 20.0;    ///< surrogate curvature, >= the data-term Lipschitz constant
    int max_iterations = 50;
};

/// 0.5 * ||S - Ox I Oy^H||_F^2 + lambda * ||I||_*
double rm_objective(const CMat& image, const CMat& s, const UndercompleteOperator& op_x,
                    const UndercompleteOperator& op_y, double lambda);

/// Entrywise max(sigma_i - threshold, 0) on a descending singular-value vector.
RVec svd_soft_threshold(const RVec& singular_values, double threshold);

/// Shannon effective rank: exp of the entropy of the normalized singular-value
/// distribution. Defined as 0 for the zero matrix.
double shannon_rank(const CMat& image);
double shannon_rank_of_spectrum(const RVec& singular_values);

/// Majorization-minimization nuclear-norm recovery. Each iteration takes a
/// gradient step on the data term, soft-thresholds the singular values by
/// lambda/tau, and recomposes; it stops once the Shannon rank of the iterate
/// drops to that of the pseudoinverse image, or after max_iterations. The
/// objective is non-increasing across iterations by the majorize-minimize
/// construction (requires tau >= 1 for these operators).
CMat rm_recover(const CMat& s, const UndercompleteOperator& op_x, const UndercompleteOperator& op_y,
                const RmParams& params, const CMat& initial,
                std::vector<RecoveryTraceRow>* trace = nullptr);

}  // namespace cisar
