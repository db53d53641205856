#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "adbd/attention.hpp"
#include "adbd/denoiser.hpp"

namespace adbd {

enum class Activation { Silu, Tanh };

std::string to_string(Activation a);
Activation parse_activation(const std::string& s);

// Attention block placed on the flattened input as a residual:
// a = x + Attn(reshape(x, tokens x model_dim)). model_dim is derived as
// field size / token_count.
struct MlpAttentionSpec {
    std::size_t token_count = 0;
    std::size_t heads = 1;
    std::size_t windows = 1;
    AttentionPriority priority = AttentionPriority::GlobalFirst;
};

struct MlpSpec {
    std::vector<std::size_t> field_shape;
    std::vector<std::size_t> hidden;  // widths of hidden dense layers
    std::size_t time_dim = 16;        // sinusoidal embedding of t / T, even
    Activation activation = Activation::Silu;
    std::optional<MlpAttentionSpec> attention;
    std::size_t schedule_steps = 1000;

    void validate() const;
    std::size_t input_size() const;  // flattened field size
    std::optional<AttentionShape> attention_shape() const;
};

// Sinusoidal embedding of tau = t / T into `dim` values:
// [sin(1000 tau f_k)..., cos(1000 tau f_k)...], f_k = 10000^(-k / (dim/2)).
std::vector<double> time_embedding(double tau, std::size_t dim);

// Flat parameter layout: optional attention block first (see
// AttentionWeightsView), then for every dense layer its weight matrix
// (out x in, row-major) followed by its bias vector.
struct DenseLayout {
    std::size_t in = 0;
    std::size_t out = 0;
    std::size_t weight_offset = 0;
    std::size_t bias_offset = 0;
};

struct MlpGradient {
    std::vector<double> params;  // same layout as MlpDenoiser::parameters()
    double loss = 0.0;           // squared error ||target - prediction||^2
};

class MlpDenoiser final : public EpsilonModel {
public:
    // Glorot-uniform weights, zero biases.
    MlpDenoiser(MlpSpec spec, std::uint64_t seed);
    MlpDenoiser(MlpSpec spec, std::vector<double> params);

    Field predict_epsilon(const Field& x, double t) const override;
    std::vector<std::size_t> field_shape() const override { return spec_.field_shape; }
    std::optional<AttentionPriority> attention_priority() const override;

    // Reverse-mode gradient of ||target - predict_epsilon(x, t)||^2.
    MlpGradient backward(const Field& x, double t, const Field& target) const;

    const MlpSpec& spec() const noexcept { return spec_; }
    std::span<const double> parameters() const noexcept { return params_; }
    std::span<double> parameters() noexcept { return params_; }
    std::size_t parameter_count() const noexcept { return params_.size(); }
    const std::vector<DenseLayout>& layers() const noexcept { return layers_; }
    std::size_t attention_parameter_count() const noexcept { return attention_params_; }

private:
    void build_layout();

    MlpSpec spec_;
    std::vector<DenseLayout> layers_;
    std::size_t attention_params_ = 0;
    std::vector<double> params_;
};

Field mlp_forward(const MlpDenoiser& model, const Field& x, std::size_t t);
MlpGradient mlp_backward(const MlpDenoiser& model, const Field& x, std::size_t t, const Field& target_eps);

}  // namespace adbd
