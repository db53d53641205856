#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

#include "adbd/attention.hpp"
#include "adbd/domains.hpp"
#include "adbd/field.hpp"
#include "adbd/mixture.hpp"
#include "adbd/schedule.hpp"
#include "adbd/spectral_field.hpp"

namespace adbd {

// Noise predictor eps_theta(x_t, t). `t` is measured in schedule steps and
// may be fractional (the ODE integrators evaluate between table entries);
// integer t reproduces the discrete model exactly. Implementations are pure
// and safe to call concurrently.
class EpsilonModel {
public:
    virtual ~EpsilonModel() = default;

    virtual Field predict_epsilon(const Field& x, double t) const = 0;
    virtual std::vector<std::size_t> field_shape() const = 0;
    // Priority the model's attention block was trained with, if it has one.
    virtual std::optional<AttentionPriority> attention_priority() const { return std::nullopt; }
};

// Bayes-optimal eps for a Gaussian-mixture domain:
// eps(x, t) = -sqrt(1 - ab_t) * grad log q_t(x) with q_t the noised mixture.
class AnalyticGmmEpsilon final : public EpsilonModel {
public:
    AnalyticGmmEpsilon(GaussianMixture mixture, NoiseSchedule schedule);

    Field predict_epsilon(const Field& x, double t) const override;
    std::vector<std::size_t> field_shape() const override { return {mixture_.dimension()}; }

    const GaussianMixture& mixture() const noexcept { return mixture_; }
    const NoiseSchedule& schedule() const noexcept { return schedule_; }

private:
    GaussianMixture mixture_;
    NoiseSchedule schedule_;
};

// Same construction for a stationary Gaussian texture field.
class AnalyticSpectralEpsilon final : public EpsilonModel {
public:
    AnalyticSpectralEpsilon(SpectralField field, NoiseSchedule schedule);

    Field predict_epsilon(const Field& x, double t) const override;
    std::vector<std::size_t> field_shape() const override { return field_.shape(); }

private:
    SpectralField field_;
    NoiseSchedule schedule_;
};

// Integer-step entry point for the mixture model.
Field analytic_epsilon(const AnalyticGmmEpsilon& model, const Field& x, std::size_t t);

std::unique_ptr<EpsilonModel> make_analytic_model(const DomainSpec& domain, const NoiseSchedule& schedule);

}  // namespace adbd
