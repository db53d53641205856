#include "adbd/mlp.hpp"

#include <cmath>

#include "adbd/errors.hpp"
#include "adbd/rng.hpp"

namespace adbd {
namespace {

using Vector = Eigen::VectorXd;

double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double activate(Activation a, double z) {
    return a == Activation::Silu ? z * logistic(z) : std::tanh(z);
}

double activate_grad(Activation a, double z) {
    if (a == Activation::Silu) {
        const double s = logistic(z);
        return s * (1.0 + z * (1.0 - s));
    }
    const double th = std::tanh(z);
    return 1.0 - th * th;
}

struct Tape {
    Matrix tokens;
    detail::AttentionTape attention;
    std::vector<Vector> inputs;  // input to each dense layer
    std::vector<Vector> pre;     // pre-activation of each dense layer
    Vector output;
};

void check_input(const MlpSpec& spec, const Field& x, double t) {
    if (x.shape() != spec.field_shape) {
        throw ConfigError("mlp: input shape " + shape_string(x.shape()) + " does not match model shape " +
                          shape_string(spec.field_shape));
    }
    if (!(t >= 0.0 && t <= static_cast<double>(spec.schedule_steps))) {
        throw ConfigError("mlp: t outside [0, T]");
    }
}

}  // namespace

std::string to_string(Activation a) { return a == Activation::Silu ? "silu" : "tanh"; }

Activation parse_activation(const std::string& s) {
    if (s == "silu") return Activation::Silu;
    if (s == "tanh") return Activation::Tanh;
    throw ConfigError("unknown activation '" + s + "' (expected silu or tanh)");
}

void MlpSpec::validate() const {
    if (field_shape.empty()) throw ConfigError("mlp: empty field shape");
    if (time_dim % 2 != 0) throw ConfigError("mlp: time embedding dimension must be even");
    if (schedule_steps == 0) throw ConfigError("mlp: schedule_steps must be positive");
    for (auto w : hidden) {
        if (w == 0) throw ConfigError("mlp: hidden width must be positive");
    }
    if (attention) {
        const std::size_t n = input_size();
        if (attention->token_count == 0 || n % attention->token_count != 0) {
            throw ConfigError("mlp: field size not divisible by attention token_count");
        }
        attention_shape()->validate();
    }
}

std::size_t MlpSpec::input_size() const { return shape_volume(field_shape); }

std::optional<AttentionShape> MlpSpec::attention_shape() const {
    if (!attention) return std::nullopt;
    return AttentionShape{attention->token_count, input_size() / attention->token_count, attention->heads,
                          attention->windows};
}

std::vector<double> time_embedding(double tau, std::size_t dim) {
    std::vector<double> e(dim);
    const std::size_t half = dim / 2;
    for (std::size_t k = 0; k < half; ++k) {
        const double freq = std::exp(-std::log(10000.0) * static_cast<double>(k) / static_cast<double>(half));
        const double angle = 1000.0 * tau * freq;
        e[k] = std::sin(angle);
        e[k + half] = std::cos(angle);
    }
    return e;
}

void MlpDenoiser::build_layout() {
    spec_.validate();
    attention_params_ = spec_.attention ? spec_.attention_shape()->parameter_count() : 0;
    std::size_t offset = attention_params_;
    std::size_t in = spec_.input_size() + spec_.time_dim;
    std::vector<std::size_t> outs = spec_.hidden;
    outs.push_back(spec_.input_size());
    layers_.clear();
    for (auto out : outs) {
        DenseLayout l{in, out, offset, offset + in * out};
        offset = l.bias_offset + out;
        layers_.push_back(l);
        in = out;
    }
    params_.assign(offset, 0.0);
}

MlpDenoiser::MlpDenoiser(MlpSpec spec, std::uint64_t seed) : spec_(std::move(spec)) {
    build_layout();
    CounterRng rng(seed, 0x6d6c70ull);
    if (attention_params_ > 0) {
        const auto shape = *spec_.attention_shape();
        const double s = std::sqrt(6.0 / static_cast<double>(2 * shape.model_dim));
        for (std::size_t i = 0; i < attention_params_; ++i) params_[i] = s * (2.0 * rng.uniform() - 1.0);
    }
    for (const auto& l : layers_) {
        const double s = std::sqrt(6.0 / static_cast<double>(l.in + l.out));
        for (std::size_t i = 0; i < l.in * l.out; ++i) {
            params_[l.weight_offset + i] = s * (2.0 * rng.uniform() - 1.0);
        }
    }
}

MlpDenoiser::MlpDenoiser(MlpSpec spec, std::vector<double> params) : spec_(std::move(spec)) {
    build_layout();
    if (params.size() != params_.size()) {
        throw ConfigError("mlp: expected " + std::to_string(params_.size()) + " parameters, got " +
                          std::to_string(params.size()));
    }
    params_ = std::move(params);
}

std::optional<AttentionPriority> MlpDenoiser::attention_priority() const {
    if (!spec_.attention) return std::nullopt;
    return spec_.attention->priority;
}

namespace {

Vector run_forward(const MlpSpec& spec, const std::vector<DenseLayout>& layers, std::span<const double> params,
                   const Field& x, double t, Tape* tape) {
    const auto n = static_cast<Eigen::Index>(spec.input_size());
    Vector a = Eigen::Map<const Vector>(x.values().data(), n);
    if (spec.attention) {
        const auto shape = *spec.attention_shape();
        const AttentionWeightsView w(shape, params.subspan(0, shape.parameter_count()));
        Matrix tokens = Eigen::Map<const Matrix>(x.values().data(), static_cast<Eigen::Index>(shape.token_count),
                                                 static_cast<Eigen::Index>(shape.model_dim));
        const Matrix mixed = detail::attention_forward(shape, spec.attention->priority, w, tokens,
                                                       tape ? &tape->attention : nullptr);
        a += Eigen::Map<const Vector>(mixed.data(), n);
        if (tape) tape->tokens = std::move(tokens);
    }
    const auto emb = time_embedding(t / static_cast<double>(spec.schedule_steps), spec.time_dim);
    Vector h(n + static_cast<Eigen::Index>(spec.time_dim));
    h.head(n) = a;
    h.tail(static_cast<Eigen::Index>(spec.time_dim)) =
        Eigen::Map<const Vector>(emb.data(), static_cast<Eigen::Index>(emb.size()));

    for (std::size_t li = 0; li < layers.size(); ++li) {
        const auto& l = layers[li];
        const Eigen::Map<const Matrix> weight(params.data() + l.weight_offset, static_cast<Eigen::Index>(l.out),
                                              static_cast<Eigen::Index>(l.in));
        const Eigen::Map<const Vector> bias(params.data() + l.bias_offset, static_cast<Eigen::Index>(l.out));
        Vector z = weight * h + bias;
        if (tape) {
            tape->inputs.push_back(h);
            tape->pre.push_back(z);
        }
        if (li + 1 < layers.size()) {
            h = z.unaryExpr([&](double v) { return activate(spec.activation, v); });
        } else {
            h = std::move(z);
        }
    }
    return h;
}

}  // namespace

Field MlpDenoiser::predict_epsilon(const Field& x, double t) const {
    check_input(spec_, x, t);
    const Vector out = run_forward(spec_, layers_, params_, x, t, nullptr);
    return Field(spec_.field_shape, std::vector<double>(out.data(), out.data() + out.size()));
}

MlpGradient MlpDenoiser::backward(const Field& x, double t, const Field& target) const {
    check_input(spec_, x, t);
    require_same_shape(x, target, "mlp_backward");
    Tape tape;
    const Vector out = run_forward(spec_, layers_, params_, x, t, &tape);
    const auto n = static_cast<Eigen::Index>(spec_.input_size());
    const Eigen::Map<const Vector> tgt(target.values().data(), n);

    MlpGradient grad;
    grad.params.assign(params_.size(), 0.0);
    const Vector residual = out - tgt;
    grad.loss = residual.squaredNorm();
    Vector g = 2.0 * residual;

    for (std::size_t li = layers_.size(); li-- > 0;) {
        const auto& l = layers_[li];
        if (li + 1 < layers_.size()) {
            const Vector& z = tape.pre[li];
            for (Eigen::Index i = 0; i < g.size(); ++i) g[i] *= activate_grad(spec_.activation, z[i]);
        }
        Eigen::Map<Matrix> g_weight(grad.params.data() + l.weight_offset, static_cast<Eigen::Index>(l.out),
                                    static_cast<Eigen::Index>(l.in));
        Eigen::Map<Vector> g_bias(grad.params.data() + l.bias_offset, static_cast<Eigen::Index>(l.out));
        g_weight.noalias() += g * tape.inputs[li].transpose();
        g_bias += g;
        const Eigen::Map<const Matrix> weight(params_.data() + l.weight_offset, static_cast<Eigen::Index>(l.out),
                                              static_cast<Eigen::Index>(l.in));
        g = weight.transpose() * g;
    }

    if (spec_.attention) {
        const auto shape = *spec_.attention_shape();
        const std::span<const double> all(params_);
        const AttentionWeightsView w(shape, all.subspan(0, shape.parameter_count()));
        // Residual branch: the attention output receives the same gradient as a.
        const Vector g_a = g.head(n);
        const Matrix g_mixed = Eigen::Map<const Matrix>(g_a.data(), static_cast<Eigen::Index>(shape.token_count),
                                                        static_cast<Eigen::Index>(shape.model_dim));
        detail::attention_backward(shape, w, tape.tokens, tape.attention, g_mixed,
                                   std::span<double>(grad.params).subspan(0, shape.parameter_count()));
    }
    return grad;
}

Field mlp_forward(const MlpDenoiser& model, const Field& x, std::size_t t) {
    if (t < 1 || t > model.spec().schedule_steps) throw ConfigError("mlp_forward: t outside [1, T]");
    return model.predict_epsilon(x, static_cast<double>(t));
}

MlpGradient mlp_backward(const MlpDenoiser& model, const Field& x, std::size_t t, const Field& target_eps) {
    if (t < 1 || t > model.spec().schedule_steps) throw ConfigError("mlp_backward: t outside [1, T]");
    return model.backward(x, static_cast<double>(t), target_eps);
}

}  // namespace adbd
