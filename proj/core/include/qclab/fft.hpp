#pragma once

#include <complex>
#include <span>

namespace qclab::fft {

/// In-place 2-D DFT of an n x n row-major array.
/// forward: X[p,q] = sum x[i,j] e^{-2 pi i (pi + qj)/n}
void forward(std::span<std::complex<double>> data, int n);
/// Normalized inverse (includes the 1/n^2 factor).
void inverse(std::span<std::complex<double>> data, int n);

/// Frequency integer for FFT index p in (-n/2, n/2].
constexpr int signed_frequency(int p, int n) noexcept { return p <= n / 2 ? p : p - n; }

}  // namespace qclab::fft
