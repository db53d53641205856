#include "adbd/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "adbd/rng.hpp"

namespace adbd {
namespace {

void require_point(const GaussianMixture& mix, const Field& x) {
    if (x.rank() != 1 || x.size() != mix.dimension()) {
        throw ConfigError("mixture of dimension " + std::to_string(mix.dimension()) +
                          " cannot score field of shape " + shape_string(x.shape()));
    }
}

// log N(x; mu, var I) for every component, plus log weight.
std::vector<double> component_log_terms(const GaussianMixture& mix, const Field& x) {
    const auto d = static_cast<double>(mix.dimension());
    std::vector<double> terms(mix.components());
    for (std::size_t k = 0; k < mix.components(); ++k) {
        double sq = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) {
            const double diff = x[j] - mix.means[k][j];
            sq += diff * diff;
        }
        const double var = mix.variances[k];
        terms[k] = std::log(mix.weights[k]) - 0.5 * d * std::log(2.0 * std::numbers::pi * var) -
                   0.5 * sq / var;
    }
    return terms;
}

double log_sum_exp(const std::vector<double>& v) {
    const double m = *std::max_element(v.begin(), v.end());
    if (!std::isfinite(m)) return m;
    double s = 0.0;
    for (double e : v) s += std::exp(e - m);
    return m + std::log(s);
}

}  // namespace

void GaussianMixture::validate() const {
    if (weights.empty()) throw ConfigError("mixture has no components");
    if (means.size() != weights.size() || variances.size() != weights.size()) {
        throw ConfigError("mixture weights, means and variances differ in length");
    }
    const std::size_t d = means.front().size();
    if (d == 0) throw ConfigError("mixture means have dimension zero");
    double total = 0.0;
    for (std::size_t k = 0; k < weights.size(); ++k) {
        if (!(weights[k] > 0.0) || !std::isfinite(weights[k])) {
            throw ConfigError("mixture weight must be positive");
        }
        if (!(variances[k] > 0.0) || !std::isfinite(variances[k])) {
            throw ConfigError("mixture variance must be positive");
        }
        if (means[k].size() != d) throw ConfigError("mixture means differ in dimension");
        for (double m : means[k]) {
            if (!std::isfinite(m)) throw ConfigError("mixture mean is not finite");
        }
        total += weights[k];
    }
    if (std::abs(total - 1.0) > 1e-12) throw ConfigError("mixture weights do not sum to 1");
}

std::vector<MixtureDraw> gmm_sample_labeled(const GaussianMixture& mix, std::size_t count,
                                            std::uint64_t seed) {
    mix.validate();
    if (count == 0) throw ConfigError("gmm_sample: count must be at least 1");
    std::vector<double> cdf(mix.components());
    std::partial_sum(mix.weights.begin(), mix.weights.end(), cdf.begin());
    std::vector<MixtureDraw> out;
    out.reserve(count);
    const std::size_t d = mix.dimension();
    for (std::size_t i = 0; i < count; ++i) {
        CounterRng rng(seed, i, 0x6d6978ull);
        const double u = rng.uniform() * cdf.back();
        auto k = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        k = std::min(k, mix.components() - 1);
        const double sd = std::sqrt(mix.variances[k]);
        Field x({d});
        for (std::size_t j = 0; j < d; ++j) x[j] = mix.means[k][j] + sd * rng.normal();
        out.push_back({std::move(x), k});
    }
    return out;
}

std::vector<Field> gmm_sample(const GaussianMixture& mix, std::size_t count, std::uint64_t seed) {
    auto draws = gmm_sample_labeled(mix, count, seed);
    std::vector<Field> out;
    out.reserve(draws.size());
    for (auto& d : draws) out.push_back(std::move(d.value));
    return out;
}

double gmm_log_density(const GaussianMixture& mix, const Field& x) {
    require_point(mix, x);
    return log_sum_exp(component_log_terms(mix, x));
}

std::vector<double> gmm_responsibilities(const GaussianMixture& mix, const Field& x) {
    require_point(mix, x);
    auto terms = component_log_terms(mix, x);
    const double lse = log_sum_exp(terms);
    for (auto& t : terms) t = std::exp(t - lse);
    return terms;
}

Field gmm_score(const GaussianMixture& mix, const Field& x) {
    const auto resp = gmm_responsibilities(mix, x);
    Field g(x.shape());
    for (std::size_t k = 0; k < mix.components(); ++k) {
        const double w = resp[k] / mix.variances[k];
        for (std::size_t j = 0; j < x.size(); ++j) g[j] += w * (mix.means[k][j] - x[j]);
    }
    return g;
}

GaussianMixture noised_mixture_at(const GaussianMixture& mix, const NoiseSchedule& schedule, double t) {
    const double ab = schedule.alpha_bar_at(t);
    const double scale = std::sqrt(ab);
    GaussianMixture out = mix;
    for (std::size_t k = 0; k < out.components(); ++k) {
        for (auto& m : out.means[k]) m *= scale;
        out.variances[k] = ab * mix.variances[k] + (1.0 - ab);
    }
    return out;
}

GaussianMixture noised_mixture(const GaussianMixture& mix, const NoiseSchedule& schedule, std::size_t t) {
    if (t < 1 || t > schedule.steps()) throw ConfigError("noised_mixture: t outside [1, T]");
    return noised_mixture_at(mix, schedule, static_cast<double>(t));
}

}  // namespace adbd
