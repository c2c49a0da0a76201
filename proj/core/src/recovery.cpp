#include "cisar/recovery.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

#include "cisar/signal.hpp"

namespace cisar {

namespace {

void check_shapes(const CMat& s, const UndercompleteOperator& op_x, const UndercompleteOperator& op_y,
                  const char* who) {
    if (s.rows() != op_x.order || s.cols() != op_y.order)
        throw DimensionMismatch(std::string(who) + ": data is " + std::to_string(s.rows()) + "x" +
                                std::to_string(s.cols()) + " but operators expect " +
                                std::to_string(op_x.order) + "x" + std::to_string(op_y.order));
    if (!s.allFinite()) throw InvalidArgument(std::string(who) + ": data has non-finite entries");
}

RVec singular_values(const CMat& a) {
    return Eigen::BDCSVD<CMat>(a).singularValues();
}

}  // namespace

UndercompleteOperator undercomplete_operator(int order, const std::vector<int>& missing) {
    if (order < 1) throw InvalidArgument("undercomplete_operator: order must be >= 1");
    UndercompleteOperator op;
    op.order = order;
    op.missing = missing;
    std::sort(op.missing.begin(), op.missing.end());
    op.missing.erase(std::unique(op.missing.begin(), op.missing.end()), op.missing.end());
    for (int row : op.missing)
        if (row < 0 || row >= order) throw InvalidArgument("undercomplete_operator: row index out of range");
    if (static_cast<int>(op.missing.size()) >= order)
        throw InvalidArgument("undercomplete_operator: all rows missing");
    op.matrix = fourier_matrix(order);
    for (int row : op.missing) op.matrix.row(row).setZero();
    op.pinv = op.matrix.adjoint();
    return op;
}

double displacement(const CMat& s, const UndercompleteOperator& op_x, const UndercompleteOperator& op_y,
                    const CMat& image) {
    check_shapes(s, op_x, op_y, "displacement");
    if (image.rows() != op_x.order || image.cols() != op_y.order)
        throw DimensionMismatch("displacement: image shape does not match the operators");
    return (s - op_x.matrix * image * op_y.matrix.adjoint()).squaredNorm();
}

CMat sl0_recover(const CMat& s, const UndercompleteOperator& op_x, const UndercompleteOperator& op_y,
                 const Sl0Params& params, std::vector<RecoveryTraceRow>* trace) {
    check_shapes(s, op_x, op_y, "sl0_recover");
    if (!(params.sigma_min > 0.0) || !(params.sigma_decay > 0.0 && params.sigma_decay < 1.0) ||
        !(params.step > 0.0) || params.inner_iterations < 1)
        throw InvalidArgument("sl0_recover: invalid parameters");

    // Hermitian projectors of the observed subspaces; the projection step
    // Ox^+ (Ox I Oy^H - S) (Oy^+)^H collapses to Px I Py - T with T constant.
    const CMat px = op_x.pinv * op_x.matrix;
    const CMat py = op_y.pinv * op_y.matrix;  // Hermitian, equals its own adjoint
    const CMat t = op_x.pinv * s * op_y.pinv.adjoint();

    CMat image = t;  // initial estimate: pseudoinverse image
    double sigma = 2.0 * image.cwiseAbs().maxCoeff();

    int iteration = 0;
    while (sigma > params.sigma_min) {
        for (int i = 0; i < params.inner_iterations; ++i, ++iteration) {
            const double inv_two_sigma2 = 1.0 / (2.0 * sigma * sigma);
            double smoothed_l0 = 0.0;
            for (Eigen::Index col = 0; col < image.cols(); ++col) {
                for (Eigen::Index row = 0; row < image.rows(); ++row) {
                    const double weight = std::exp(-std::norm(image(row, col)) * inv_two_sigma2);
                    smoothed_l0 += 1.0 - weight;
                    image(row, col) -= params.step * weight * image(row, col);
                }
            }
            image = image - px * image * py + t;  // feasibility projection
            if (!image.allFinite())
                throw Divergence("sl0_recover: non-finite iterate", iteration);
            if (trace) {
                RecoveryTraceRow row;
                row.iteration = iteration;
                row.objective = smoothed_l0;
                row.shannon_rank = shannon_rank(image);
                row.residual = std::sqrt(displacement(s, op_x, op_y, image));
                trace->push_back(row);
            }
        }
        sigma *= params.sigma_decay;
    }
    return image;
}

double rm_objective(const CMat& image, const CMat& s, const UndercompleteOperator& op_x,
                    const UndercompleteOperator& op_y, double lambda) {
    return 0.5 * displacement(s, op_x, op_y, image) + lambda * singular_values(image).sum();
}

RVec svd_soft_threshold(const RVec& sigma, double threshold) {
    if (threshold < 0.0) throw InvalidArgument("svd_soft_threshold: threshold must be >= 0");
    RVec out = sigma;
    for (Eigen::Index i = 0; i < out.size(); ++i) out(i) = std::max(out(i) - threshold, 0.0);
    return out;
}

double shannon_rank_of_spectrum(const RVec& sigma) {
    const double total = sigma.sum();
    if (!(total > 0.0)) return 0.0;
    const double floor = sigma.size() > 0 ? sigma.maxCoeff() * 1e-12 : 0.0;
    double entropy = 0.0;
    for (Eigen::Index i = 0; i < sigma.size(); ++i) {
        if (sigma(i) <= floor) continue;
        const double p = sigma(i) / total;
        entropy -= p * std::log(p);
    }
    return std::exp(entropy);
}

double shannon_rank(const CMat& image) {
    if (image.size() == 0) return 0.0;
    return shannon_rank_of_spectrum(singular_values(image));
}

CMat rm_recover(const CMat& s, const UndercompleteOperator& op_x, const UndercompleteOperator& op_y,
                const RmParams& params, const CMat& initial, std::vector<RecoveryTraceRow>* trace) {
    check_shapes(s, op_x, op_y, "rm_recover");
    if (initial.rows() != op_x.order || initial.cols() != op_y.order)
        throw DimensionMismatch("rm_recover: initial image shape mismatch");
    if (!(params.lambda >= 0.0)) throw InvalidArgument("rm_recover: lambda must be >= 0");
    const double lipschitz = op_x.gram_spectral_norm() * op_y.gram_spectral_norm();
    if (!(params.tau >= lipschitz) || !(params.tau > 0.0))
        throw InvalidArgument("rm_recover: tau must be positive and at least the data-term curvature");
    if (params.max_iterations < 1) throw InvalidArgument("rm_recover: need at least one iteration");

    const CMat pinv_image = op_x.pinv * s * op_y.pinv.adjoint();
    // ties count as reaching the pseudoinverse image's rank (lambda -> 0 keeps
    // the spectrum bit-for-bit, so the comparison needs roundoff headroom)
    const double stop_rank = shannon_rank(pinv_image) * (1.0 + 1e-12) + 1e-12;

    CMat image = initial;
    for (int k = 0; k < params.max_iterations; ++k) {
        const CMat residual = op_x.matrix * image * op_y.matrix.adjoint() - s;
        const CMat stepped = image - (op_x.matrix.adjoint() * residual * op_y.matrix) / params.tau;

        Eigen::BDCSVD<CMat> svd(stepped, Eigen::ComputeThinU | Eigen::ComputeThinV);
        if (!svd.singularValues().allFinite())
            throw Divergence("rm_recover: SVD produced non-finite singular values", k);
        const RVec shrunk = svd_soft_threshold(svd.singularValues(), params.lambda / params.tau);
        image = svd.matrixU() * shrunk.asDiagonal() * svd.matrixV().adjoint();

        const double rank_now = shannon_rank_of_spectrum(shrunk);
        if (trace) {
            RecoveryTraceRow row;
            row.iteration = k;
            row.objective = 0.5 * (op_x.matrix * image * op_y.matrix.adjoint() - s).squaredNorm() +
                            params.lambda * shrunk.sum();
            row.shannon_rank = rank_now;
            row.residual = std::sqrt(displacement(s, op_x, op_y, image));
            trace->push_back(row);
        }
        if (rank_now <= stop_rank) break;  // post-update check, repeat-until semantics
    }
    return image;
}

}  // namespace cisar
