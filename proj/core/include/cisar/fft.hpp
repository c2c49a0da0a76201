#pragma once

#include <cstddef>
#include <vector>

#include "cisar/types.hpp"

namespace cisar::fft {

bool is_pow2(std::size_t n);
std::size_t next_pow2(std::size_t n);

/// In-place radix-2 transform; length must be a power of two.
/// Forward uses the exp(-j*2*pi*k*n/N) kernel, unscaled; inverse uses the
/// conjugate kernel and divides by N, so inverse(forward(x)) == x.
void transform(std::vector<Complex>& data, bool inverse);

inline void forward(std::vector<Complex>& data) { transform(data, false); }
inline void inverse(std::vector<Complex>& data) { transform(data, true); }

}  // namespace cisar::fft
