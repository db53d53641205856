#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace adbd {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class AttentionPriority { GlobalFirst, LocalFirst };
enum class Direction { Forward, Reverse };

// Forward (noising) leg attends globally first; reverse (denoising) leg
// segments tokens first.
AttentionPriority select_priority(Direction direction) noexcept;

std::string to_string(AttentionPriority p);
AttentionPriority parse_priority(const std::string& s);

struct AttentionShape {
    std::size_t token_count = 0;
    std::size_t model_dim = 0;
    std::size_t heads = 1;
    std::size_t windows = 1;

    void validate() const;
    std::size_t head_dim() const { return model_dim / heads; }
    std::size_t window_length() const { return token_count / windows; }
    // Four model_dim x model_dim projections: query, key, value, output.
    std::size_t parameter_count() const { return 4 * model_dim * model_dim; }
};

// Projection weights laid out row-major and back to back as
// [W_query | W_key | W_value | W_output]; tokens are row vectors, so a
// projection is `tokens * W`.
struct AttentionWeightsView {
    Eigen::Map<const Matrix> query;
    Eigen::Map<const Matrix> key;
    Eigen::Map<const Matrix> value;
    Eigen::Map<const Matrix> output;

    AttentionWeightsView(const AttentionShape& shape, std::span<const double> params);
};

struct AttentionConfig {
    AttentionShape shape;
    AttentionPriority priority = AttentionPriority::GlobalFirst;
    std::vector<double> weights;  // shape.parameter_count() values

    void validate() const;
    AttentionWeightsView view() const { return AttentionWeightsView(shape, weights); }

    // Glorot-uniform projections from a seeded counter stream.
    static AttentionConfig random(const AttentionShape& shape, AttentionPriority priority, std::uint64_t seed);
};

// Project Q, K, V over the full sequence, split channels into heads,
// attend over every token per head, concatenate, project.
Matrix global_priority_attention(const AttentionConfig& cfg, const Matrix& tokens);

// Split the sequence into `windows` contiguous segments first, then run
// multi-head attention independently inside each segment.
Matrix local_priority_attention(const AttentionConfig& cfg, const Matrix& tokens);

// Dispatches on cfg.priority.
Matrix apply_attention(const AttentionConfig& cfg, const Matrix& tokens);

namespace detail {

// Intermediates kept for the backward pass of one attention call.
struct AttentionTape {
    struct Segment {
        std::size_t row_begin = 0;
        Matrix q, k, v, concat;
        std::vector<Matrix> probs;  // one row-stochastic matrix per head
    };
    std::vector<Segment> segments;
};

Matrix attention_forward(const AttentionShape& shape, AttentionPriority priority,
                         const AttentionWeightsView& w, const Matrix& tokens, AttentionTape* tape);

// Accumulates parameter gradients into grad_params (same layout as the
// weights) and returns d(loss)/d(tokens).
Matrix attention_backward(const AttentionShape& shape, const AttentionWeightsView& w, const Matrix& tokens,
                          const AttentionTape& tape, const Matrix& grad_out, std::span<double> grad_params);

}  // namespace detail

}  // namespace adbd
