#include "cisar/imaging.hpp"

#include <cmath>

#include "cisar/signal.hpp"

namespace cisar {

CMat rd_image(const CMat& s) {
    if (s.size() == 0) throw InvalidArgument("rd_image: empty data matrix");
    const CMat fm = fourier_matrix(static_cast<int>(s.rows()));
    const CMat fn = fourier_matrix(static_cast<int>(s.cols()));
    return fm.adjoint() * s * fn;
}

CMat reconstruct_data(const CMat& image) {
    if (image.size() == 0) throw InvalidArgument("reconstruct_data: empty image");
    const CMat fm = fourier_matrix(static_cast<int>(image.rows()));
    const CMat fn = fourier_matrix(static_cast<int>(image.cols()));
    return fm * image * fn.adjoint();
}

double image_contrast(const CMat& image) {
    if (image.size() == 0) throw InvalidArgument("image_contrast: empty image");
    const RMat mag = image.cwiseAbs();
    const double mean = mag.mean();
    if (!(mean > 0.0)) throw InvalidArgument("image_contrast: zero image");
    const double var = (mag.array() - mean).square().mean();
    return std::sqrt(var) / mean;
}

namespace {

CMat metric_view(const CMat& image, MetricDomain domain) {
    if (domain == MetricDomain::complex_values) return image;
    return image.cwiseAbs().cast<Complex>();
}

}  // namespace

double coherence(const CMat& image, const CMat& reference, MetricDomain domain) {
    if (image.rows() != reference.rows() || image.cols() != reference.cols())
        throw DimensionMismatch("coherence: shape mismatch");
    const CMat a = metric_view(image, domain);
    const CMat b = metric_view(reference, domain);
    const double na = a.norm();
    const double nb = b.norm();
    if (!(na > 0.0) || !(nb > 0.0)) throw InvalidArgument("coherence: zero-norm image");
    const Complex inner = (b.array() * a.array().conjugate()).sum();
    return std::abs(inner) / (na * nb);
}

double nmse(const CMat& image, const CMat& reference, MetricDomain domain) {
    if (image.rows() != reference.rows() || image.cols() != reference.cols())
        throw DimensionMismatch("nmse: shape mismatch");
    const CMat a = metric_view(image, domain);
    const CMat b = metric_view(reference, domain);
    const double nb = b.norm();
    if (!(nb > 0.0)) throw InvalidArgument("nmse: zero reference");
    return (a - b).norm() / nb;
}

CMat centered(const CMat& image) {
    const Eigen::Index m = image.rows();
    const Eigen::Index n = image.cols();
    CMat out(m, n);
    for (Eigen::Index r = 0; r < m; ++r)
        for (Eigen::Index c = 0; c < n; ++c)
            out((r + m / 2) % m, (c + n / 2) % n) = image(r, c);
    return out;
}

}  // namespace cisar
