#include "adbd/bridge.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "adbd/errors.hpp"
#include "adbd/parallel.hpp"

namespace adbd {
namespace {

// Below this many schedule steps the score eps / sqrt(1 - ab) is evaluated
// at the floor instead, since 1 - ab vanishes at t = 0.
constexpr double kMinScoreTime = 1e-3;

void check_finite(const Field& x, std::size_t step, double s) {
    if (!x.all_finite()) {
        std::ostringstream os;
        os << "flow_ode: non-finite state after sub-step " << step << " (s = " << s << ")";
        throw NumericalError(os.str());
    }
}

Field ddim_substep(const Field& x, const EpsilonModel& model, const NoiseSchedule& sched, double t_cur,
                   double t_next) {
    const double ab_cur = sched.alpha_bar_at(t_cur);
    const double ab_next = sched.alpha_bar_at(t_next);
    const Field eps = model.predict_epsilon(x, t_cur);
    require_same_shape(x, eps, "flow_ode");
    const double c_data = std::sqrt(ab_next) / std::sqrt(ab_cur);
    const double s_cur = std::sqrt(1.0 - ab_cur);
    const double s_next = std::sqrt(1.0 - ab_next);
    Field out(x.shape());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = c_data * (x[i] - s_cur * eps[i]) + s_next * eps[i];
    return out;
}

// dx/ds on the segment [t_lo, t_hi] (schedule steps); rate is -d log ab / dt.
Field vp_drift(const Field& x, const EpsilonModel& model, const NoiseSchedule& sched, double t, double rate) {
    const double t_eval = std::max(t, kMinScoreTime);
    const double sigma = std::sqrt(1.0 - sched.alpha_bar_at(t_eval));
    const Field eps = model.predict_epsilon(x, t_eval);
    require_same_shape(x, eps, "flow_ode");
    const double k = -0.5 * rate * static_cast<double>(sched.steps());
    Field d(x.shape());
    for (std::size_t i = 0; i < x.size(); ++i) d[i] = k * (x[i] - eps[i] / sigma);
    return d;
}

Field heun_substep(const Field& x, const EpsilonModel& model, const NoiseSchedule& sched, double s_cur,
                   double s_next) {
    const double T = static_cast<double>(sched.steps());
    const double t_cur = s_cur * T;
    const double t_next = s_next * T;
    const double rate = sched.decay_rate(std::min(t_cur, t_next), std::max(t_cur, t_next));
    const double h = s_next - s_cur;
    const Field k1 = vp_drift(x, model, sched, t_cur, rate);
    Field predictor(x.shape());
    for (std::size_t i = 0; i < x.size(); ++i) predictor[i] = x[i] + h * k1[i];
    const Field k2 = vp_drift(predictor, model, sched, t_next, rate);
    Field out(x.shape());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + 0.5 * h * (k1[i] + k2[i]);
    return out;
}

void check_priorities(const EpsilonModel& src, const EpsilonModel& tgt) {
    if (auto p = src.attention_priority(); p && *p != select_priority(Direction::Forward)) {
        throw ConfigError("bridge: source model attention must be " + to_string(select_priority(Direction::Forward)) +
                          "-first for the forward leg");
    }
    if (auto p = tgt.attention_priority(); p && *p != select_priority(Direction::Reverse)) {
        throw ConfigError("bridge: target model attention must be " + to_string(select_priority(Direction::Reverse)) +
                          "-first for the reverse leg");
    }
    if (src.field_shape() != tgt.field_shape()) throw ConfigError("bridge: models disagree on field shape");
}

}  // namespace

std::string to_string(Integrator i) { return i == Integrator::Euler ? "euler" : "heun"; }

Integrator parse_integrator(const std::string& s) {
    if (s == "euler") return Integrator::Euler;
    if (s == "heun") return Integrator::Heun;
    throw ConfigError("unknown integrator '" + s + "' (expected euler or heun)");
}

void BridgeConfig::validate() const {
    if (steps_per_unit_time == 0) throw ConfigError("bridge: steps_per_unit_time must be >= 1");
    if (!(depth >= 0.0 && depth <= 1.0)) throw ConfigError("bridge: depth must lie in [0, 1]");
}

Field flow_ode(const Field& x_start, const EpsilonModel& model, double t0, double t1, const BridgeConfig& cfg,
               std::vector<Field>* snapshots) {
    cfg.validate();
    if (!(t0 >= 0.0 && t0 <= 1.0 && t1 >= 0.0 && t1 <= 1.0)) {
        throw ConfigError("flow_ode: times must lie in [0, 1]");
    }
    if (x_start.shape() != model.field_shape()) throw ConfigError("flow_ode: field shape does not match model");
    if (t0 == t1) return x_start;

    const double span = t1 - t0;
    const auto n = std::max<long long>(1, std::llround(std::abs(span) * static_cast<double>(cfg.steps_per_unit_time)));
    const double T = static_cast<double>(cfg.schedule.steps());
    Field x = x_start;
    double s_cur = t0;
    for (long long k = 1; k <= n; ++k) {
        const double s_next = (k == n) ? t1 : t0 + span * (static_cast<double>(k) / static_cast<double>(n));
        if (cfg.integrator == Integrator::Euler) {
            x = ddim_substep(x, model, cfg.schedule, s_cur * T, s_next * T);
        } else {
            x = heun_substep(x, model, cfg.schedule, s_cur, s_next);
        }
        check_finite(x, static_cast<std::size_t>(k), s_next);
        if (snapshots) snapshots->push_back(x);
        s_cur = s_next;
    }
    return x;
}

double snap_depth(double depth, std::size_t steps_per_unit_time) {
    if (!(depth >= 0.0 && depth <= 1.0)) throw ConfigError("snap_depth: depth must lie in [0, 1]");
    const auto n = static_cast<double>(steps_per_unit_time);
    return static_cast<double>(std::llround(depth * n)) / n;
}

BridgeTrajectory ubdp_migrate(const Field& x_source, const EpsilonModel& model_src, const EpsilonModel& model_tgt,
                              const BridgeConfig& cfg) {
    BridgeConfig full = cfg;
    full.depth = 1.0;
    return depth_migrate(x_source, model_src, model_tgt, full);
}

BridgeTrajectory depth_migrate(const Field& x_source, const EpsilonModel& model_src, const EpsilonModel& model_tgt,
                               const BridgeConfig& cfg) {
    cfg.validate();
    check_priorities(model_src, model_tgt);
    BridgeTrajectory traj;
    traj.source = x_source;
    traj.depth_requested = cfg.depth;
    traj.depth = snap_depth(cfg.depth, cfg.steps_per_unit_time);
    traj.depth_steps = static_cast<std::size_t>(std::llround(traj.depth * static_cast<double>(cfg.steps_per_unit_time)));
    std::vector<Field>* snaps = cfg.keep_snapshots ? &traj.snapshots : nullptr;
    traj.latent_at_depth = flow_ode(x_source, model_src, 0.0, traj.depth, cfg, snaps);
    traj.migrated = flow_ode(traj.latent_at_depth, model_tgt, traj.depth, 0.0, cfg, snaps);
    return traj;
}

std::vector<BridgeTrajectory> depth_migrate_batch(const std::vector<Field>& sources, const EpsilonModel& model_src,
                                                  const EpsilonModel& model_tgt, const BridgeConfig& cfg,
                                                  unsigned workers) {
    std::vector<BridgeTrajectory> out(sources.size());
    parallel_for(
        sources.size(), [&](std::size_t i) { out[i] = depth_migrate(sources[i], model_src, model_tgt, cfg); },
        workers);
    return out;
}

}  // namespace adbd
