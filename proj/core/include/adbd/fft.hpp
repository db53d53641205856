#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace adbd::fft {

using Spectrum = std::vector<std::complex<double>>;

// Unnormalized forward 2-D DFT of a real H x W row-major grid:
// X[u, v] = sum_{y, x} g[y, x] exp(-2 pi i (u y / H + v x / W)).
Spectrum forward_2d(std::span<const double> grid, std::size_t height, std::size_t width);

// Inverse of forward_2d, including the 1 / (H W) factor; returns the real part.
std::vector<double> inverse_2d_real(const Spectrum& spectrum, std::size_t height, std::size_t width);

// Signed frequency of bin k along an axis of length n, in cycles per sample,
// in [-0.5, 0.5]. The Nyquist bin of an even axis maps to +0.5.
double bin_frequency(std::size_t k, std::size_t n) noexcept;

// Index of the bin holding the negated frequency.
inline std::size_t mirror_bin(std::size_t k, std::size_t n) noexcept { return k == 0 ? 0 : n - k; }

}  // namespace adbd::fft
