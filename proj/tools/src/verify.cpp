#include <algorithm>
#include <cmath>

#include <adbd/denoiser.hpp>
#include <adbd/diffusion.hpp>
#include <adbd/mixture.hpp>
#include <adbd/rng.hpp>

#include "adbd_cli/commands.hpp"

namespace adbd::cli {
namespace {

constexpr std::size_t kProbeCount = 20;

CheckResult check_schedule(const NoiseSchedule& schedule) {
    long double product = 1.0L;
    double worst = 0.0;
    for (std::size_t t = 1; t <= schedule.steps(); ++t) {
        product *= 1.0L - static_cast<long double>(schedule.beta(t));
        const double rel = static_cast<double>(std::fabs((schedule.alpha_bar(t) - product) / product));
        worst = std::max(worst, rel);
    }
    return {"schedule", worst < 1e-12, worst, 1e-12, "alpha_bar vs long-double product"};
}

CheckResult check_score(const GaussianMixture& mix, const NoiseSchedule& schedule, std::uint64_t seed) {
    const AnalyticGmmEpsilon model(mix, schedule);
    CounterRng rng(seed, 0x73636f72ull);
    const double h = 1e-4;
    double worst = 0.0;
    for (int probe = 0; probe < 100; ++probe) {
        const std::size_t t = 1 + rng.below(schedule.steps());
        const auto noised = noised_mixture(mix, schedule, t);
        Field x({mix.dimension()});
        for (auto& v : x.values()) v = 3.0 * rng.normal();
        const auto eps = analytic_epsilon(model, x, t);
        const double scale = std::sqrt(1.0 - schedule.alpha_bar(t));
        double err = 0.0, norm = 0.0;
        for (std::size_t k = 0; k < x.size(); ++k) {
            Field up = x, down = x;
            up[k] += h;
            down[k] -= h;
            const double grad = (gmm_log_density(noised, up) - gmm_log_density(noised, down)) / (2.0 * h);
            const double fd = -scale * grad;
            err = std::max(err, std::abs(eps[k] - fd));
            norm = std::max(norm, std::abs(fd));
        }
        worst = std::max(worst, err / std::max(norm, 1e-8));
    }
    return {"score", worst < 1e-5, worst, 1e-5, "analytic eps vs finite-difference log-density"};
}

double round_trip_error(const std::vector<Field>& xs, const EpsilonModel& forward, const EpsilonModel& reverse,
                        const BridgeConfig& fwd, const BridgeConfig& rev) {
    double worst = 0.0;
    for (const auto& x : xs) {
        const auto back = flow_ode(flow_ode(x, forward, 0.0, 1.0, fwd), reverse, 1.0, 0.0, rev);
        worst = std::max(worst, max_abs_diff(x, back));
    }
    return worst;
}

NoiseSchedule corrupted(const NoiseSchedule& schedule) {
    std::vector<double> betas(schedule.betas().begin(), schedule.betas().end());
    for (auto& b : betas) b = std::min(0.999, b * 1.25);
    return NoiseSchedule::from_betas(std::move(betas));
}

std::vector<CheckResult> check_round_trip(const GaussianMixture& mix, const RunConfig& cfg, Fault fault) {
    const auto schedule = cfg.noise_schedule();
    const auto reverse_schedule = fault == Fault::Schedule ? corrupted(schedule) : schedule;
    const AnalyticGmmEpsilon forward(mix, schedule);
    const AnalyticGmmEpsilon reverse(mix, reverse_schedule);
    const auto xs = gmm_sample(mix, kProbeCount, mix64(cfg.seed ^ 0x72747269ull));
    const std::size_t n = cfg.steps_per_unit_time;

    BridgeConfig fwd{schedule, n, Integrator::Heun};
    BridgeConfig rev{reverse_schedule, n, Integrator::Heun};
    const double heun = round_trip_error(xs, forward, reverse, fwd, rev);

    fwd.integrator = rev.integrator = Integrator::Euler;
    const double coarse = round_trip_error(xs, forward, reverse, fwd, rev);
    fwd.steps_per_unit_time = rev.steps_per_unit_time = 2 * n;
    const double fine = round_trip_error(xs, forward, reverse, fwd, rev);
    const double ratio = coarse / fine;

    return {{"round_trip_heun", heun < 1e-6, heun, 1e-6, "Heun 0->1->0, N=" + std::to_string(n)},
            {"round_trip_order", ratio >= 1.6 && ratio <= 2.4, ratio, 2.0,
             "Euler error ratio N/2N, accepted in [1.6, 2.4]"}};
}

CheckResult check_ddim_ode(const GaussianMixture& mix, const RunConfig& cfg) {
    const auto schedule = cfg.noise_schedule();
    const AnalyticGmmEpsilon model(mix, schedule);
    const auto latents = standard_normal_fields({mix.dimension()}, kProbeCount, mix64(cfg.seed ^ 0x6c6174ull));
    auto deviation = [&](std::size_t n) {
        const BridgeConfig euler{schedule, n, Integrator::Euler};
        const BridgeConfig heun{schedule, n, Integrator::Heun};
        double worst = 0.0;
        for (const auto& z : latents) {
            worst = std::max(worst, max_abs_diff(flow_ode(z, model, 1.0, 0.0, euler),
                                                 flow_ode(z, model, 1.0, 0.0, heun)));
        }
        return worst;
    };
    const double d2000 = deviation(2000);
    const double d4000 = deviation(4000);
    return {"ddim_ode_agreement", d2000 < 5.0 * d4000, d2000, 5.0 * d4000,
            "deviation at 2000 sub-steps vs 5x deviation at 4000"};
}

double mlp_loss(const MlpSpec& spec, std::vector<double> params, const Field& x, double t, const Field& target) {
    const MlpDenoiser m(spec, std::move(params));
    const auto y = m.predict_epsilon(x, t);
    double loss = 0.0;
    for (std::size_t k = 0; k < y.size(); ++k) loss += (target[k] - y[k]) * (target[k] - y[k]);
    return loss;
}

CheckResult check_gradient(std::uint64_t seed) {
    MlpSpec spec;
    spec.field_shape = {8};
    spec.hidden = {12, 10};
    spec.attention = MlpAttentionSpec{4, 1, 2, AttentionPriority::LocalFirst};
    const MlpDenoiser model(spec, seed);
    CounterRng rng(seed, 0x67726164ull);
    Field x({8}), target({8});
    for (auto& v : x.values()) v = rng.normal();
    for (auto& v : target.values()) v = rng.normal();
    const double t = 137.0;
    const auto analytic = model.backward(x, t, target);
    const double h = 1e-5;
    double worst = 0.0;
    std::vector<double> params(model.parameters().begin(), model.parameters().end());
    for (std::size_t k = 0; k < params.size(); ++k) {
        auto up = params, down = params;
        up[k] += h;
        down[k] -= h;
        const double fd = (mlp_loss(spec, up, x, t, target) - mlp_loss(spec, down, x, t, target)) / (2.0 * h);
        const double a = analytic.params[k];
        worst = std::max(worst, std::abs(a - fd) / std::max({std::abs(a), std::abs(fd), 1e-6}));
    }
    return {"gradient", worst < 1e-4, worst, 1e-4, std::to_string(params.size()) + " parameters"};
}

}  // namespace

VerifyReport run_verification(const RunConfig& cfg, Fault fault) {
    const auto schedule = cfg.noise_schedule();
    const auto mix = std::get<GaussianMixture>(default_gmm_pair().source);
    VerifyReport report;
    report.checks.push_back(check_schedule(schedule));
    report.checks.push_back(check_score(mix, schedule, cfg.seed));
    for (auto& c : check_round_trip(mix, cfg, fault)) report.checks.push_back(std::move(c));
    report.checks.push_back(check_ddim_ode(mix, cfg));
    report.checks.push_back(check_gradient(cfg.seed));
    return report;
}

}  // namespace adbd::cli
