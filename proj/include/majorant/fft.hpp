#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace majorant::fft {

/// In-place synthesis: x[m] <- sum_n x[n] e(+n m / M).
void synthesize(std::span<std::complex<double>> x);

/// In-place analysis: x[n] <- sum_m x[m] e(-n m / M). Not normalized.
void analyze(std::span<std::complex<double>> x);

/// Smallest power of two >= n (n >= 1).
std::size_t next_pow2(std::size_t n);

}  // namespace majorant::fft
