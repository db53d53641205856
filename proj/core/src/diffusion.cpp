#include "adbd/diffusion.hpp"

#include <cmath>

#include "adbd/errors.hpp"
#include "adbd/parallel.hpp"

namespace adbd {
namespace {

void check_step(std::size_t t, const NoiseSchedule& schedule, const char* who) {
    if (t < 1 || t > schedule.steps()) throw ConfigError(std::string(who) + ": t outside [1, T]");
}

}  // namespace

Field forward_noise_with(const Field& x0, std::size_t t, const NoiseSchedule& schedule, const Field& eps) {
    check_step(t, schedule, "forward_noise");
    require_same_shape(x0, eps, "forward_noise");
    const double ab = schedule.alpha_bar(t);
    const double a = std::sqrt(ab);
    const double s = std::sqrt(1.0 - ab);
    Field out(x0.shape());
    for (std::size_t i = 0; i < x0.size(); ++i) out[i] = a * x0[i] + s * eps[i];
    return out;
}

Field forward_noise(const Field& x0, std::size_t t, const NoiseSchedule& schedule, CounterRng& rng) {
    check_step(t, schedule, "forward_noise");
    Field eps(x0.shape());
    for (auto& v : eps.values()) v = rng.normal();
    return forward_noise_with(x0, t, schedule, eps);
}

double ddim_sigma(const NoiseSchedule& schedule, std::size_t t, double eta) {
    check_step(t, schedule, "ddim_sigma");
    if (!(eta >= 0.0) || !std::isfinite(eta)) throw ConfigError("ddim_sigma: eta must be finite and >= 0");
    const double ab = schedule.alpha_bar(t);
    const double ab_prev = schedule.alpha_bar(t - 1);
    return eta * std::sqrt((1.0 - ab_prev) / (1.0 - ab)) * std::sqrt(1.0 - ab / ab_prev);
}

Field ddim_step(const Field& x_t, std::size_t t, const EpsilonModel& model, const NoiseSchedule& schedule,
                double sigma_t, CounterRng& rng) {
    check_step(t, schedule, "ddim_step");
    const double ab = schedule.alpha_bar(t);
    const double ab_prev = schedule.alpha_bar(t - 1);
    const double radicand = 1.0 - ab_prev - sigma_t * sigma_t;
    if (!std::isfinite(sigma_t) || radicand < 0.0) {
        throw ConfigError("ddim_step: sigma_t^2 exceeds 1 - alpha_bar(t-1) at t = " + std::to_string(t));
    }
    const Field eps = model.predict_epsilon(x_t, static_cast<double>(t));
    require_same_shape(x_t, eps, "ddim_step");
    const double c_data = std::sqrt(ab_prev) / std::sqrt(ab);
    const double s_t = std::sqrt(1.0 - ab);
    const double c_dir = std::sqrt(radicand);
    Field out(x_t.shape());
    for (std::size_t i = 0; i < x_t.size(); ++i) {
        out[i] = c_data * (x_t[i] - s_t * eps[i]) + c_dir * eps[i];
    }
    if (sigma_t != 0.0) {
        for (auto& v : out.values()) v += sigma_t * rng.normal();
    }
    if (!out.all_finite()) throw NumericalError("ddim_step: non-finite state at t = " + std::to_string(t));
    return out;
}

Field ddim_sample(const Field& x_T, const EpsilonModel& model, const SamplerConfig& cfg,
                  std::uint64_t sample_index) {
    Field x = x_T;
    for (std::size_t t = cfg.schedule.steps(); t >= 1; --t) {
        CounterRng rng(cfg.seed, sample_index, t);
        const double sigma =
            cfg.sigma_mode == SigmaMode::Deterministic ? 0.0 : ddim_sigma(cfg.schedule, t, cfg.eta);
        x = ddim_step(x, t, model, cfg.schedule, sigma, rng);
    }
    return x;
}

std::vector<Field> ddim_sample_batch(const std::vector<Field>& x_T, const EpsilonModel& model,
                                     const SamplerConfig& cfg, unsigned workers) {
    std::vector<Field> out(x_T.size());
    parallel_for(
        x_T.size(), [&](std::size_t i) { out[i] = ddim_sample(x_T[i], model, cfg, i); }, workers);
    return out;
}

std::vector<Field> standard_normal_fields(const std::vector<std::size_t>& shape, std::size_t count,
                                          std::uint64_t seed) {
    std::vector<Field> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        CounterRng rng(seed, i, 0x6e6f726dull);
        Field f(shape);
        for (auto& v : f.values()) v = rng.normal();
        out.push_back(std::move(f));
    }
    return out;
}

}  // namespace adbd
