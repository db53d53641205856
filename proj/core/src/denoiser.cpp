#include "adbd/denoiser.hpp"

#include <cmath>

namespace adbd {
namespace {

void check_time(double t, const NoiseSchedule& s) {
    if (!(t >= 0.0 && t <= static_cast<double>(s.steps()))) {
        throw ConfigError("predict_epsilon: t outside [0, T]");
    }
}

}  // namespace

AnalyticGmmEpsilon::AnalyticGmmEpsilon(GaussianMixture mixture, NoiseSchedule schedule)
    : mixture_(std::move(mixture)), schedule_(std::move(schedule)) {
    mixture_.validate();
}

Field AnalyticGmmEpsilon::predict_epsilon(const Field& x, double t) const {
    check_time(t, schedule_);
    if (!x.all_finite()) throw NumericalError("analytic_epsilon: non-finite input");
    const double ab = schedule_.alpha_bar_at(t);
    const double sigma = std::sqrt(1.0 - ab);
    Field eps = gmm_score(noised_mixture_at(mixture_, schedule_, t), x);
    for (auto& v : eps.values()) v *= -sigma;
    return eps;
}

AnalyticSpectralEpsilon::AnalyticSpectralEpsilon(SpectralField field, NoiseSchedule schedule)
    : field_(std::move(field)), schedule_(std::move(schedule)) {
    field_.validate();
}

Field AnalyticSpectralEpsilon::predict_epsilon(const Field& x, double t) const {
    check_time(t, schedule_);
    if (!x.all_finite()) throw NumericalError("analytic_epsilon: non-finite input");
    const double ab = schedule_.alpha_bar_at(t);
    const double sigma = std::sqrt(1.0 - ab);
    Field eps = spectral_score(noised_spectral_field_at(field_, schedule_, t), x);
    for (auto& v : eps.values()) v *= -sigma;
    return eps;
}

Field analytic_epsilon(const AnalyticGmmEpsilon& model, const Field& x, std::size_t t) {
    if (t < 1 || t > model.schedule().steps()) throw ConfigError("analytic_epsilon: t outside [1, T]");
    return model.predict_epsilon(x, static_cast<double>(t));
}

std::unique_ptr<EpsilonModel> make_analytic_model(const DomainSpec& domain, const NoiseSchedule& schedule) {
    if (const auto* m = std::get_if<GaussianMixture>(&domain)) {
        return std::make_unique<AnalyticGmmEpsilon>(*m, schedule);
    }
    return std::make_unique<AnalyticSpectralEpsilon>(std::get<SpectralField>(domain), schedule);
}

}  // namespace adbd
