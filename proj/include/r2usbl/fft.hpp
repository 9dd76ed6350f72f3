#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

// Thin wrapper over FFTW for the real-input transforms used by the pipeline.
namespace r2usbl::fft {

using Complex = std::complex<double>;

std::size_t next_pow2(std::size_t n);

/// Forward transform of `input` zero-padded (or truncated) to `length`.
/// Returns the length/2+1 non-negative frequency bins, kernel e^{-j2πkn/L}.
std::vector<Complex> forward(std::span<const double> input, std::size_t length);

/// Inverse of forward(); scaled by 1/length so inverse(forward(x)) == x.
std::vector<double> inverse(std::span<const Complex> bins, std::size_t length);

}  // namespace r2usbl::fft
