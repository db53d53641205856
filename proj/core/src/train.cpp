#include "adbd/train.hpp"

#include <cmath>
#include <numeric>

#include "adbd/errors.hpp"
#include "adbd/rng.hpp"
#include "adbd/stats.hpp"

namespace adbd {
namespace {

class Optimizer {
public:
    Optimizer(const TrainConfig& cfg, std::size_t n) : cfg_(cfg) {
        if (cfg.optimizer == OptimizerKind::Adam) {
            m_.assign(n, 0.0);
            v_.assign(n, 0.0);
        }
    }

    void step(std::span<double> params, std::span<const double> grad) {
        if (cfg_.optimizer == OptimizerKind::Sgd) {
            for (std::size_t i = 0; i < params.size(); ++i) params[i] -= cfg_.learning_rate * grad[i];
            return;
        }
        ++t_;
        const double c1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
        const double c2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
        for (std::size_t i = 0; i < params.size(); ++i) {
            m_[i] = cfg_.beta1 * m_[i] + (1.0 - cfg_.beta1) * grad[i];
            v_[i] = cfg_.beta2 * v_[i] + (1.0 - cfg_.beta2) * grad[i] * grad[i];
            const double m_hat = m_[i] / c1;
            const double v_hat = v_[i] / c2;
            params[i] -= cfg_.learning_rate * m_hat / (std::sqrt(v_hat) + cfg_.adam_epsilon);
        }
    }

private:
    const TrainConfig& cfg_;
    std::vector<double> m_, v_;
    std::uint64_t t_ = 0;
};

std::vector<std::size_t> shuffled(std::size_t n, std::uint64_t seed, std::size_t epoch) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    CounterRng rng(seed, epoch, 0x73687566ull);
    for (std::size_t i = n; i > 1; --i) {
        const auto j = static_cast<std::size_t>(rng.below(i));
        std::swap(order[i - 1], order[j]);
    }
    return order;
}

}  // namespace

std::string to_string(OptimizerKind k) { return k == OptimizerKind::Adam ? "adam" : "sgd"; }

OptimizerKind parse_optimizer(const std::string& s) {
    if (s == "adam") return OptimizerKind::Adam;
    if (s == "sgd") return OptimizerKind::Sgd;
    throw ConfigError("unknown optimizer '" + s + "' (expected adam or sgd)");
}

void TrainConfig::validate() const {
    if (epochs == 0 || batch_size == 0) throw ConfigError("train: epochs and batch_size must be positive");
    if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
        throw ConfigError("train: learning_rate must be finite and >= 0");
    }
    if (!(beta1 >= 0.0 && beta1 < 1.0 && beta2 >= 0.0 && beta2 < 1.0 && adam_epsilon > 0.0)) {
        throw ConfigError("train: invalid Adam constants");
    }
}

TrainResult train_denoiser(const std::vector<Field>& data, MlpDenoiser initial, const NoiseSchedule& schedule,
                           const TrainConfig& cfg) {
    cfg.validate();
    if (data.empty()) throw ConfigError("train: empty dataset");
    for (const auto& x : data) {
        if (x.shape() != initial.field_shape()) throw ConfigError("train: dataset shape does not match model");
    }
    if (initial.spec().schedule_steps != schedule.steps()) {
        throw ConfigError("train: model and schedule disagree on T");
    }
    TrainResult result{std::move(initial), {}};
    MlpDenoiser& model = result.model;
    Optimizer opt(cfg, model.parameter_count());
    const double coords = static_cast<double>(data.front().size());
    std::vector<double> grad(model.parameter_count());

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        const auto order = shuffled(data.size(), cfg.seed, epoch);
        double epoch_sum = 0.0;
        for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
            const std::size_t end = std::min(order.size(), start + cfg.batch_size);
            std::fill(grad.begin(), grad.end(), 0.0);
            for (std::size_t pos = start; pos < end; ++pos) {
                CounterRng rng(cfg.seed, epoch * data.size() + pos, 0x7472616eull);
                const auto t = static_cast<std::size_t>(1 + rng.below(schedule.steps()));
                Field eps(data[order[pos]].shape());
                for (auto& v : eps.values()) v = rng.normal();
                const Field x_t = forward_noise_with(data[order[pos]], t, schedule, eps);
                const MlpGradient g = model.backward(x_t, static_cast<double>(t), eps);
                for (std::size_t i = 0; i < grad.size(); ++i) grad[i] += g.params[i];
                epoch_sum += g.loss / coords;
            }
            const double scale = 1.0 / (static_cast<double>(end - start) * coords);
            for (auto& g : grad) g *= scale;
            opt.step(model.parameters(), grad);
        }
        const double epoch_loss = epoch_sum / static_cast<double>(data.size());
        if (!std::isfinite(epoch_loss)) {
            throw NumericalError("train: loss diverged at epoch " + std::to_string(epoch + 1));
        }
        result.epoch_loss.push_back(epoch_loss);
    }
    for (double p : model.parameters()) {
        if (!std::isfinite(p)) throw NumericalError("train: non-finite weights after training");
    }
    return result;
}

double evaluate_fit(const EpsilonModel& model, const GaussianMixture& mix, const SamplerConfig& sampler,
                    std::size_t n, std::uint64_t seed) {
    if (n == 0) throw ConfigError("evaluate_fit: n must be positive");
    const auto starts = standard_normal_fields(model.field_shape(), n, seed);
    const auto generated = ddim_sample_batch(starts, model, sampler);
    const auto reference = gmm_sample(mix, n, mix64(seed ^ 0x65766166ull));
    return energy_distance(generated, reference);
}

}  // namespace adbd
