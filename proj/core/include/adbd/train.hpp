#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "adbd/diffusion.hpp"
#include "adbd/field.hpp"
#include "adbd/mixture.hpp"
#include "adbd/mlp.hpp"
#include "adbd/schedule.hpp"

namespace adbd {

enum class OptimizerKind { Sgd, Adam };

std::string to_string(OptimizerKind k);
OptimizerKind parse_optimizer(const std::string& s);

struct TrainConfig {
    std::size_t epochs = 60;
    std::size_t batch_size = 64;
    double learning_rate = 2e-3;
    OptimizerKind optimizer = OptimizerKind::Adam;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double adam_epsilon = 1e-8;
    std::uint64_t seed = 0;

    void validate() const;
};

struct TrainResult {
    MlpDenoiser model;
    std::vector<double> epoch_loss;  // mean per-coordinate squared error per epoch
};

// Noise-prediction training: every example in a batch draws t uniformly
// from {1..T} and eps ~ N(0, I); the loss is the mean squared error between
// eps and the prediction at x_t. Batch order, timesteps and noise come from
// counter streams keyed by (seed, epoch, position), so a run is
// bit-reproducible. Throws NumericalError naming the epoch if the loss goes
// non-finite.
TrainResult train_denoiser(const std::vector<Field>& data, MlpDenoiser initial, const NoiseSchedule& schedule,
                           const TrainConfig& cfg);

// Energy distance between n deterministic DDIM samples of `model` (started
// from standard normal draws) and n draws from `mix`.
double evaluate_fit(const EpsilonModel& model, const GaussianMixture& mix, const SamplerConfig& sampler,
                    std::size_t n, std::uint64_t seed);

}  // namespace adbd
