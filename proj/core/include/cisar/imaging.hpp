#pragma once

#include "cisar/types.hpp"

namespace cisar {

/// Range-Doppler image formation on a slow-time x frequency matrix using the
/// scaled-unitary DFT convention: I = Fm^H * S * Fn. Rows index Doppler
/// (cross-range), columns index range; bin (0,0) is the DC / zero-range cell
/// (display helpers apply the centering shift).
CMat rd_image(const CMat& s);

/// Inverse of rd_image with the complete Fourier dictionaries:
/// S = Fm * I * Fn^H, so rd_image(reconstruct_data(I)) == I.
CMat reconstruct_data(const CMat& image);

/// Whether image comparisons act on the complex values or on magnitudes only.
enum class MetricDomain { complex_values, magnitude };

/// Relative spatial standard deviation of the image magnitude.
double image_contrast(const CMat& image);

/// |<reference, image>| / (||image||_F * ||reference||_F), in [0, 1].
double coherence(const CMat& image, const CMat& reference,
                 MetricDomain domain = MetricDomain::complex_values);

/// ||image - reference||_F / ||reference||_F.
double nmse(const CMat& image, const CMat& reference,
            MetricDomain domain = MetricDomain::complex_values);

/// fftshift in both dimensions, used when rendering images.
CMat centered(const CMat& image);

}  // namespace cisar
