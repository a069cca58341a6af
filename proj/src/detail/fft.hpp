#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace skg::detail {

/// In-place iterative radix-2 FFT. Length must be a power of two.
/// The inverse transform includes the 1/n scaling.
void fft_pow2(std::vector<std::complex<double>>& a, bool inverse);

std::size_t next_pow2(std::size_t n);

/// Full linear convolution of a and b (length |a| + |b| - 1) via FFT.
std::vector<std::complex<double>> fft_convolve(const std::vector<std::complex<double>>& a,
                                               const std::vector<std::complex<double>>& b);

}  // namespace skg::detail
