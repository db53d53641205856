#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "adbd/denoiser.hpp"
#include "adbd/field.hpp"
#include "adbd/rng.hpp"
#include "adbd/schedule.hpp"

namespace adbd {

enum class SigmaMode { Deterministic, Ancestral };

struct SamplerConfig {
    NoiseSchedule schedule;
    SigmaMode sigma_mode = SigmaMode::Deterministic;
    double eta = 1.0;  // only read in Ancestral mode
    std::uint64_t seed = 0;
};

// One draw of x_t = sqrt(ab_t) x0 + sqrt(1 - ab_t) eps, eps ~ N(0, I).
Field forward_noise(const Field& x0, std::size_t t, const NoiseSchedule& schedule, CounterRng& rng);

// Same map with caller-supplied eps.
Field forward_noise_with(const Field& x0, std::size_t t, const NoiseSchedule& schedule, const Field& eps);

// sigma_t = eta * sqrt((1 - ab_{t-1}) / (1 - ab_t)) * sqrt(1 - ab_t / ab_{t-1}).
double ddim_sigma(const NoiseSchedule& schedule, std::size_t t, double eta);

// x_{t-1} = sqrt(ab_{t-1}) (x_t - sqrt(1 - ab_t) eps) / sqrt(ab_t)
//           + sqrt(1 - ab_{t-1} - sigma_t^2) eps + sigma_t z.
// With sigma_t == 0 no random numbers are drawn.
Field ddim_step(const Field& x_t, std::size_t t, const EpsilonModel& model, const NoiseSchedule& schedule,
                double sigma_t, CounterRng& rng);

// Iterates ddim_step for t = T..1. Ancestral noise at step t is drawn from
// the stream keyed by (cfg.seed, sample_index, t).
Field ddim_sample(const Field& x_T, const EpsilonModel& model, const SamplerConfig& cfg,
                  std::uint64_t sample_index = 0);

std::vector<Field> ddim_sample_batch(const std::vector<Field>& x_T, const EpsilonModel& model,
                                     const SamplerConfig& cfg, unsigned workers = 0);

// Standard-normal starting points keyed by (seed, index).
std::vector<Field> standard_normal_fields(const std::vector<std::size_t>& shape, std::size_t count,
                                          std::uint64_t seed);

}  // namespace adbd
