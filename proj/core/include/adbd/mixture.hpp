#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "adbd/field.hpp"
#include "adbd/schedule.hpp"

namespace adbd {

// Mixture of isotropic Gaussians in R^d.
struct GaussianMixture {
    std::vector<double> weights;              // positive, sum to 1
    std::vector<std::vector<double>> means;   // each of length d
    std::vector<double> variances;            // per-component isotropic variance

    std::size_t dimension() const { return means.empty() ? 0 : means.front().size(); }
    std::size_t components() const { return weights.size(); }

    // Throws ConfigError unless the invariants hold.
    void validate() const;
};

// Component index for each draw is exposed for occupancy checks.
struct MixtureDraw {
    Field value;
    std::size_t component = 0;
};

std::vector<MixtureDraw> gmm_sample_labeled(const GaussianMixture& mix, std::size_t count,
                                            std::uint64_t seed);
std::vector<Field> gmm_sample(const GaussianMixture& mix, std::size_t count, std::uint64_t seed);

// log q(x) by log-sum-exp over components.
double gmm_log_density(const GaussianMixture& mix, const Field& x);

// Responsibilities p(k | x); sums to 1.
std::vector<double> gmm_responsibilities(const GaussianMixture& mix, const Field& x);

// grad_x log q(x) in closed form: sum_k r_k(x) (mu_k - x) / var_k.
Field gmm_score(const GaussianMixture& mix, const Field& x);

// Exact marginal of x_t = sqrt(ab) x_0 + sqrt(1 - ab) eps for x_0 ~ mix,
// with ab = alpha_bar_at(t). Accepts fractional t in [0, T].
GaussianMixture noised_mixture_at(const GaussianMixture& mix, const NoiseSchedule& schedule, double t);
GaussianMixture noised_mixture(const GaussianMixture& mix, const NoiseSchedule& schedule, std::size_t t);

}  // namespace adbd
