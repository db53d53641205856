#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "adbd/field.hpp"
#include "adbd/schedule.hpp"

namespace adbd {

// Stationary Gaussian random field on a periodic H x W grid. Its covariance
// is diagonal in the unitary 2-D DFT basis with per-bin variance
// `spectrum[u * W + v]`, so density, score and noised marginal are all exact
// through one FFT pair. Used as the image-domain analog of a mixture.
struct SpectralField {
    std::size_t height = 0;
    std::size_t width = 0;
    std::vector<double> mean;      // H*W pixel mean
    std::vector<double> spectrum;  // H*W positive bin variances, conjugate-symmetric

    std::vector<std::size_t> shape() const { return {height, width}; }
    void validate() const;
    // Mean of the bin variances, i.e. the per-pixel variance.
    double pixel_variance() const;
};

// Draws are clamped to [clamp_lo, clamp_hi] after sampling; pass an infinite
// range to get exact Gaussian draws.
std::vector<Field> spectral_field_sample(const SpectralField& field, std::size_t count, std::uint64_t seed,
                                         double clamp_lo = -1.0, double clamp_hi = 1.0);

double spectral_log_density(const SpectralField& field, const Field& x);

// grad_x log q(x) = -C^{-1} (x - mean).
Field spectral_score(const SpectralField& field, const Field& x);

SpectralField noised_spectral_field_at(const SpectralField& field, const NoiseSchedule& schedule, double t);

}  // namespace adbd
