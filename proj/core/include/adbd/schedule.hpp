#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace adbd {

// Discrete variance-preserving noise schedule. Step t = 0 is clean data
// (alpha_bar(0) == 1); alpha_bar(t) is the cumulative product of
// (1 - beta_k) for k = 1..t. Immutable once built.
class NoiseSchedule {
public:
    // betas[k - 1] is beta_k for k = 1..T. Each must lie strictly in (0, 1).
    static NoiseSchedule from_betas(std::vector<double> betas);

    std::size_t steps() const noexcept { return betas_.size(); }

    double beta(std::size_t t) const;        // 1 <= t <= T
    double alpha(std::size_t t) const;       // 1 - beta(t)
    double alpha_bar(std::size_t t) const;   // 0 <= t <= T

    std::span<const double> betas() const noexcept { return betas_; }
    std::span<const double> alphas() const noexcept { return alphas_; }
    std::span<const double> alpha_bars() const noexcept { return alpha_bars_; }

    // Continuous extension on t in [0, T]: log alpha_bar is linear between
    // integer steps, so integer arguments reproduce the table exactly.
    double alpha_bar_at(double t) const;
    double log_alpha_bar_at(double t) const;

    // Mean of -d(log alpha_bar)/dt over [t_lo, t_hi]. A zero-width interval
    // returns the rate of the unit segment starting at floor(t_lo).
    double decay_rate(double t_lo, double t_hi) const;

    bool operator==(const NoiseSchedule&) const = default;

private:
    NoiseSchedule() = default;

    std::vector<double> betas_;
    std::vector<double> alphas_;
    std::vector<double> alpha_bars_;
    std::vector<double> log_alpha_bars_;
};

// betas linearly spaced from beta_start (t = 1) to beta_end (t = T).
NoiseSchedule linear_schedule(std::size_t steps, double beta_start, double beta_end);

// t / T as a coordinate in [0, 1].
double state_coordinate(std::size_t t, const NoiseSchedule& schedule);

struct ScheduleParams {
    std::size_t steps = 1000;
    double beta_start = 1e-4;
    double beta_end = 0.02;
};

inline NoiseSchedule make_schedule(const ScheduleParams& p) {
    return linear_schedule(p.steps, p.beta_start, p.beta_end);
}

}  // namespace adbd
