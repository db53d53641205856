#include "adbd/attention.hpp"

#include <cmath>

#include "adbd/errors.hpp"
#include "adbd/rng.hpp"

namespace adbd {
namespace {

using Segment = detail::AttentionTape::Segment;

void softmax_rows(Matrix& s) {
    for (Eigen::Index r = 0; r < s.rows(); ++r) {
        const double m = s.row(r).maxCoeff();
        s.row(r) = (s.row(r).array() - m).exp();
        s.row(r) /= s.row(r).sum();
    }
}

// Per-head scaled dot-product attention on already projected q, k, v.
// Fills seg.probs and seg.concat.
void attend_heads(const AttentionShape& shape, Segment& seg) {
    const auto dh = static_cast<Eigen::Index>(shape.head_dim());
    const double scale = 1.0 / std::sqrt(static_cast<double>(dh));
    const auto n = seg.q.rows();
    seg.concat.resize(n, seg.q.cols());
    seg.probs.resize(shape.heads);
    for (std::size_t h = 0; h < shape.heads; ++h) {
        const auto c0 = static_cast<Eigen::Index>(h) * dh;
        Matrix scores = (seg.q.middleCols(c0, dh) * seg.k.middleCols(c0, dh).transpose()) * scale;
        softmax_rows(scores);
        seg.concat.middleCols(c0, dh) = scores * seg.v.middleCols(c0, dh);
        seg.probs[h] = std::move(scores);
    }
}

Matrix global_first(const AttentionShape& shape, const AttentionWeightsView& w, const Matrix& tokens,
                    detail::AttentionTape& tape) {
    // Whole-sequence projections, then the head split.
    Segment seg;
    seg.row_begin = 0;
    seg.q = tokens * w.query;
    seg.k = tokens * w.key;
    seg.v = tokens * w.value;
    attend_heads(shape, seg);
    Matrix out = seg.concat * w.output;
    tape.segments.push_back(std::move(seg));
    return out;
}

Matrix local_first(const AttentionShape& shape, const AttentionWeightsView& w, const Matrix& tokens,
                   detail::AttentionTape& tape) {
    // Token segmentation first; each window is projected and attended alone.
    const auto len = static_cast<Eigen::Index>(shape.window_length());
    Matrix out(tokens.rows(), tokens.cols());
    for (std::size_t j = 0; j < shape.windows; ++j) {
        const auto r0 = static_cast<Eigen::Index>(j) * len;
        const Matrix window = tokens.middleRows(r0, len);
        Segment seg;
        seg.row_begin = static_cast<std::size_t>(r0);
        seg.q = window * w.query;
        seg.k = window * w.key;
        seg.v = window * w.value;
        attend_heads(shape, seg);
        out.middleRows(r0, len) = seg.concat * w.output;
        tape.segments.push_back(std::move(seg));
    }
    return out;
}

void check_tokens(const AttentionShape& shape, const Matrix& tokens) {
    if (static_cast<std::size_t>(tokens.rows()) != shape.token_count ||
        static_cast<std::size_t>(tokens.cols()) != shape.model_dim) {
        throw ConfigError("attention: tokens are " + std::to_string(tokens.rows()) + "x" +
                          std::to_string(tokens.cols()) + ", expected " + std::to_string(shape.token_count) +
                          "x" + std::to_string(shape.model_dim));
    }
}

}  // namespace

AttentionPriority select_priority(Direction direction) noexcept {
    return direction == Direction::Forward ? AttentionPriority::GlobalFirst : AttentionPriority::LocalFirst;
}

std::string to_string(AttentionPriority p) { return p == AttentionPriority::GlobalFirst ? "global" : "local"; }

AttentionPriority parse_priority(const std::string& s) {
    if (s == "global") return AttentionPriority::GlobalFirst;
    if (s == "local") return AttentionPriority::LocalFirst;
    throw ConfigError("unknown attention priority '" + s + "' (expected global or local)");
}

void AttentionShape::validate() const {
    if (token_count == 0 || model_dim == 0 || heads == 0 || windows == 0) {
        throw ConfigError("attention: counts must be positive");
    }
    if (model_dim % heads != 0) throw ConfigError("attention: model_dim not divisible by heads");
    if (token_count % windows != 0) throw ConfigError("attention: token_count not divisible by windows");
}

AttentionWeightsView::AttentionWeightsView(const AttentionShape& shape, std::span<const double> params)
    : query(params.data(), static_cast<Eigen::Index>(shape.model_dim), static_cast<Eigen::Index>(shape.model_dim)),
      key(params.data() + shape.model_dim * shape.model_dim, static_cast<Eigen::Index>(shape.model_dim),
          static_cast<Eigen::Index>(shape.model_dim)),
      value(params.data() + 2 * shape.model_dim * shape.model_dim, static_cast<Eigen::Index>(shape.model_dim),
            static_cast<Eigen::Index>(shape.model_dim)),
      output(params.data() + 3 * shape.model_dim * shape.model_dim, static_cast<Eigen::Index>(shape.model_dim),
             static_cast<Eigen::Index>(shape.model_dim)) {
    if (params.size() != shape.parameter_count()) throw ConfigError("attention: weight count mismatch");
}

void AttentionConfig::validate() const {
    shape.validate();
    if (weights.size() != shape.parameter_count()) throw ConfigError("attention: weight count mismatch");
}

AttentionConfig AttentionConfig::random(const AttentionShape& shape, AttentionPriority priority,
                                        std::uint64_t seed) {
    shape.validate();
    AttentionConfig cfg{shape, priority, std::vector<double>(shape.parameter_count())};
    const double s = std::sqrt(6.0 / static_cast<double>(2 * shape.model_dim));
    CounterRng rng(seed, 0x61747465ull);
    for (auto& w : cfg.weights) w = s * (2.0 * rng.uniform() - 1.0);
    return cfg;
}

namespace detail {

Matrix attention_forward(const AttentionShape& shape, AttentionPriority priority, const AttentionWeightsView& w,
                         const Matrix& tokens, AttentionTape* tape) {
    shape.validate();
    check_tokens(shape, tokens);
    AttentionTape scratch;
    AttentionTape& t = tape ? *tape : scratch;
    t.segments.clear();
    return priority == AttentionPriority::GlobalFirst ? global_first(shape, w, tokens, t)
                                                      : local_first(shape, w, tokens, t);
}

Matrix attention_backward(const AttentionShape& shape, const AttentionWeightsView& w, const Matrix& tokens,
                          const AttentionTape& tape, const Matrix& grad_out, std::span<double> grad_params) {
    const auto d = static_cast<Eigen::Index>(shape.model_dim);
    const auto dh = static_cast<Eigen::Index>(shape.head_dim());
    const double scale = 1.0 / std::sqrt(static_cast<double>(dh));
    if (grad_params.size() != shape.parameter_count()) throw ConfigError("attention: gradient size mismatch");
    Eigen::Map<Matrix> g_query(grad_params.data(), d, d);
    Eigen::Map<Matrix> g_key(grad_params.data() + d * d, d, d);
    Eigen::Map<Matrix> g_value(grad_params.data() + 2 * d * d, d, d);
    Eigen::Map<Matrix> g_output(grad_params.data() + 3 * d * d, d, d);

    Matrix grad_tokens = Matrix::Zero(tokens.rows(), tokens.cols());
    for (const auto& seg : tape.segments) {
        const auto r0 = static_cast<Eigen::Index>(seg.row_begin);
        const auto n = seg.q.rows();
        const Matrix x = tokens.middleRows(r0, n);
        const Matrix g_y = grad_out.middleRows(r0, n);

        g_output.noalias() += seg.concat.transpose() * g_y;
        const Matrix g_concat = g_y * w.output.transpose();

        Matrix g_q(n, d), g_k(n, d), g_v(n, d);
        for (std::size_t h = 0; h < shape.heads; ++h) {
            const auto c0 = static_cast<Eigen::Index>(h) * dh;
            const Matrix& p = seg.probs[h];
            const Matrix g_head = g_concat.middleCols(c0, dh);
            const Matrix g_p = g_head * seg.v.middleCols(c0, dh).transpose();
            g_v.middleCols(c0, dh) = p.transpose() * g_head;
            // Softmax Jacobian row by row: dS = P .* (dP - rowsum(dP .* P)).
            const Eigen::VectorXd row_dot = (g_p.array() * p.array()).rowwise().sum();
            Matrix g_s = p.array() * (g_p.colwise() - row_dot).array();
            g_s *= scale;
            g_q.middleCols(c0, dh) = g_s * seg.k.middleCols(c0, dh);
            g_k.middleCols(c0, dh) = g_s.transpose() * seg.q.middleCols(c0, dh);
        }
        g_query.noalias() += x.transpose() * g_q;
        g_key.noalias() += x.transpose() * g_k;
        g_value.noalias() += x.transpose() * g_v;
        grad_tokens.middleRows(r0, n) =
            g_q * w.query.transpose() + g_k * w.key.transpose() + g_v * w.value.transpose();
    }
    return grad_tokens;
}

}  // namespace detail

Matrix global_priority_attention(const AttentionConfig& cfg, const Matrix& tokens) {
    cfg.validate();
    if (cfg.priority != AttentionPriority::GlobalFirst) {
        throw ConfigError("global_priority_attention: config is not GlobalFirst");
    }
    return detail::attention_forward(cfg.shape, AttentionPriority::GlobalFirst, cfg.view(), tokens, nullptr);
}

Matrix local_priority_attention(const AttentionConfig& cfg, const Matrix& tokens) {
    cfg.validate();
    if (cfg.priority != AttentionPriority::LocalFirst) {
        throw ConfigError("local_priority_attention: config is not LocalFirst");
    }
    return detail::attention_forward(cfg.shape, AttentionPriority::LocalFirst, cfg.view(), tokens, nullptr);
}

Matrix apply_attention(const AttentionConfig& cfg, const Matrix& tokens) {
    cfg.validate();
    return detail::attention_forward(cfg.shape, cfg.priority, cfg.view(), tokens, nullptr);
}

}  // namespace adbd
