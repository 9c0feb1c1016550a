#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace hurst::detail {

/// Smallest 2^a 3^b 5^c >= n.
std::size_t good_fft_size(std::size_t n);

/// Unnormalised real-to-half-complex transform of length in.size();
/// out must hold in.size() / 2 + 1 values. Plans are shared and thread-safe.
void fft_forward(std::span<const double> in, std::span<std::complex<double>> out);

/// Inverse of fft_forward without the 1/N factor. `in` is clobbered.
void fft_inverse(std::span<std::complex<double>> in, std::span<double> out);

}  // namespace hurst::detail
