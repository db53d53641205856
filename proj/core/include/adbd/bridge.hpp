#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "adbd/denoiser.hpp"
#include "adbd/field.hpp"
#include "adbd/schedule.hpp"

namespace adbd {

enum class Integrator { Euler, Heun };

std::string to_string(Integrator i);
Integrator parse_integrator(const std::string& s);

struct BridgeConfig {
    NoiseSchedule schedule;
    std::size_t steps_per_unit_time = 1000;
    Integrator integrator = Integrator::Euler;
    double depth = 1.0;  // i in [0, 1]; read by depth_migrate only
    bool keep_snapshots = false;

    void validate() const;
};

struct BridgeTrajectory {
    Field source;
    Field latent_at_depth;
    Field migrated;
    double depth_requested = 1.0;
    double depth = 1.0;           // snapped to the sub-step grid
    std::size_t depth_steps = 0;  // sub-steps taken on each leg
    std::vector<Field> snapshots;  // forward then reverse states, if requested
};

// Integrates the probability-flow ODE from normalized time t0 to t1 (both in
// [0, 1]); t0 < t1 noises, t0 > t1 denoises. The span is cut into
// round(|t1 - t0| * steps_per_unit_time) uniform sub-steps (at least one).
//
// Euler: each sub-step is the sigma = 0 DDIM update between the two grid
// times, which is the exact Euler step of the flow in the variables
// (x / sqrt(ab), sqrt((1 - ab) / ab)).
// Heun: explicit trapezoidal predictor-corrector on the variance-preserving
// drift dx/ds = 1/2 (d log ab / ds) (x - eps / sqrt(1 - ab)).
//
// t0 == t1 returns x_start unchanged without evaluating the model.
Field flow_ode(const Field& x_start, const EpsilonModel& model, double t0, double t1, const BridgeConfig& cfg,
               std::vector<Field>* snapshots = nullptr);

// Snaps i to the nearest multiple of 1 / steps_per_unit_time.
double snap_depth(double depth, std::size_t steps_per_unit_time);

// Full-depth U-shaped bridge: forward flow 0 -> 1 under the source model,
// reverse flow 1 -> 0 under the target model. Models carrying attention
// blocks must have been trained with select_priority(Forward) and
// select_priority(Reverse) respectively.
BridgeTrajectory ubdp_migrate(const Field& x_source, const EpsilonModel& model_src,
                              const EpsilonModel& model_tgt, const BridgeConfig& cfg);

// Same bridge cut at depth cfg.depth: forward 0 -> i in the source domain,
// reverse i -> 0 in the target domain.
BridgeTrajectory depth_migrate(const Field& x_source, const EpsilonModel& model_src,
                               const EpsilonModel& model_tgt, const BridgeConfig& cfg);

std::vector<BridgeTrajectory> depth_migrate_batch(const std::vector<Field>& sources, const EpsilonModel& model_src,
                                                  const EpsilonModel& model_tgt, const BridgeConfig& cfg,
                                                  unsigned workers = 0);

}  // namespace adbd
