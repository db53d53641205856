#include "adbd/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "adbd/errors.hpp"

namespace adbd {

NoiseSchedule NoiseSchedule::from_betas(std::vector<double> betas) {
    if (betas.empty()) {
        throw ConfigError("noise schedule needs at least one step");
    }
    NoiseSchedule s;
    s.alphas_.reserve(betas.size());
    s.alpha_bars_.reserve(betas.size() + 1);
    s.log_alpha_bars_.reserve(betas.size() + 1);
    s.alpha_bars_.push_back(1.0);
    s.log_alpha_bars_.push_back(0.0);
    double log_acc = 0.0;
    for (std::size_t k = 0; k < betas.size(); ++k) {
        const double b = betas[k];
        if (!std::isfinite(b) || b <= 0.0 || b >= 1.0) {
            throw ConfigError("beta_" + std::to_string(k + 1) + " outside (0, 1)");
        }
        const double a = 1.0 - b;
        s.alphas_.push_back(a);
        s.alpha_bars_.push_back(s.alpha_bars_.back() * a);
        log_acc += std::log1p(-b);
        s.log_alpha_bars_.push_back(log_acc);
        if (!(s.alpha_bars_.back() > 0.0)) {
            throw ConfigError("alpha_bar underflows to zero at step " + std::to_string(k + 1));
        }
    }
    s.betas_ = std::move(betas);
    return s;
}

double NoiseSchedule::beta(std::size_t t) const {
    if (t < 1 || t > steps()) throw ConfigError("beta: step out of range");
    return betas_[t - 1];
}

double NoiseSchedule::alpha(std::size_t t) const {
    if (t < 1 || t > steps()) throw ConfigError("alpha: step out of range");
    return alphas_[t - 1];
}

double NoiseSchedule::alpha_bar(std::size_t t) const {
    if (t > steps()) throw ConfigError("alpha_bar: step out of range");
    return alpha_bars_[t];
}

double NoiseSchedule::log_alpha_bar_at(double t) const {
    const double T = static_cast<double>(steps());
    if (!(t >= 0.0 && t <= T)) throw ConfigError("alpha_bar_at: time out of range");
    const double lo = std::floor(t);
    const auto k = static_cast<std::size_t>(lo);
    if (k >= steps()) return log_alpha_bars_.back();
    const double frac = t - lo;
    if (frac == 0.0) return log_alpha_bars_[k];
    return log_alpha_bars_[k] + frac * (log_alpha_bars_[k + 1] - log_alpha_bars_[k]);
}

double NoiseSchedule::alpha_bar_at(double t) const {
    const double r = std::round(t);
    if (r == t && r >= 0.0 && r <= static_cast<double>(steps())) {
        return alpha_bars_[static_cast<std::size_t>(r)];
    }
    return std::exp(log_alpha_bar_at(t));
}

double NoiseSchedule::decay_rate(double t_lo, double t_hi) const {
    const double T = static_cast<double>(steps());
    const double a = std::clamp(t_lo, 0.0, T);
    const double b = std::clamp(t_hi, 0.0, T);
    if (b - a > 0.0) return (log_alpha_bar_at(a) - log_alpha_bar_at(b)) / (b - a);
    auto k = static_cast<std::size_t>(std::floor(a));
    if (k >= steps()) k = steps() - 1;
    return log_alpha_bars_[k] - log_alpha_bars_[k + 1];
}

NoiseSchedule linear_schedule(std::size_t steps, double beta_start, double beta_end) {
    if (steps == 0) throw ConfigError("linear_schedule: steps must be positive");
    if (!std::isfinite(beta_start) || !std::isfinite(beta_end)) {
        throw ConfigError("linear_schedule: non-finite beta bound");
    }
    if (!(beta_start > 0.0 && beta_start <= beta_end && beta_end < 1.0)) {
        throw ConfigError("linear_schedule: need 0 < beta_start <= beta_end < 1");
    }
    std::vector<double> betas(steps);
    if (steps == 1) {
        betas[0] = beta_start;
    } else {
        const double span = beta_end - beta_start;
        const double denom = static_cast<double>(steps - 1);
        for (std::size_t k = 0; k < steps; ++k) {
            betas[k] = beta_start + span * (static_cast<double>(k) / denom);
        }
        betas.back() = beta_end;
    }
    return NoiseSchedule::from_betas(std::move(betas));
}

double state_coordinate(std::size_t t, const NoiseSchedule& schedule) {
    if (t > schedule.steps()) throw ConfigError("state_coordinate: t outside [0, T]");
    return static_cast<double>(t) / static_cast<double>(schedule.steps());
}

}  // namespace adbd
