#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <filesystem>

#include <adbd/checkpoint.hpp>
#include <adbd/errors.hpp>
#include <adbd/mlp.hpp>
#include <adbd/rng.hpp>

namespace adbd {
namespace {

Field random_field(std::vector<std::size_t> shape, std::uint64_t seed) {
    CounterRng rng(seed, 0x666c64ull);
    Field f(std::move(shape));
    for (auto& v : f.values()) v = rng.normal();
    return f;
}

double squared_error(const MlpDenoiser& m, const Field& x, double t, const Field& target) {
    const auto y = m.predict_epsilon(x, t);
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) s += (target[i] - y[i]) * (target[i] - y[i]);
    return s;
}

// Worst relative error between backward() and central differences.
double gradient_check(const MlpDenoiser& model, const Field& x, double t, const Field& target) {
    const auto analytic = model.backward(x, t, target);
    const std::vector<double> base(model.parameters().begin(), model.parameters().end());
    const double h = 1e-5;
    double worst = 0.0;
    for (std::size_t k = 0; k < base.size(); ++k) {
        auto up = base, down = base;
        up[k] += h;
        down[k] -= h;
        const double fd = (squared_error(MlpDenoiser(model.spec(), up), x, t, target) -
                           squared_error(MlpDenoiser(model.spec(), down), x, t, target)) /
                          (2.0 * h);
        const double a = analytic.params[k];
        worst = std::max(worst, std::abs(a - fd) / std::max({std::abs(a), std::abs(fd), 1e-6}));
    }
    return worst;
}

TEST(TimeEmbedding, Layout) {
    const auto e = time_embedding(0.25, 4);
    ASSERT_EQ(e.size(), 4u);
    EXPECT_DOUBLE_EQ(e[0], std::sin(250.0));
    EXPECT_NEAR(e[1], std::sin(250.0 * std::pow(10000.0, -0.5)), 1e-12);
    EXPECT_DOUBLE_EQ(e[2], std::cos(250.0));
    EXPECT_NEAR(e[3], std::cos(250.0 * std::pow(10000.0, -0.5)), 1e-12);
}

TEST(MlpForward, ZeroWeightsGiveZeroOutput) {
    MlpSpec spec{{3}, {8, 8}};
    MlpDenoiser m(spec, std::vector<double>(MlpDenoiser(spec, 1).parameter_count(), 0.0));
    const auto y = mlp_forward(m, random_field({3}, 1), 500);
    for (double v : y.values()) EXPECT_EQ(v, 0.0);
}

TEST(MlpForward, IdentityLayerCopiesInput) {
    MlpSpec spec{{2, 2}, {}};
    MlpDenoiser m(spec, 0);
    auto params = std::vector<double>(m.parameter_count(), 0.0);
    const auto& l = m.layers().front();
    ASSERT_EQ(l.in, 4u + spec.time_dim);
    for (std::size_t i = 0; i < 4; ++i) params[l.weight_offset + i * l.in + i] = 1.0;
    MlpDenoiser id(spec, params);
    const auto x = random_field({2, 2}, 3);
    EXPECT_EQ(mlp_forward(id, x, 17), x);
}

TEST(MlpForward, DeterministicAndPure) {
    MlpSpec spec{{4}, {16}};
    spec.attention = MlpAttentionSpec{2, 1, 1, AttentionPriority::GlobalFirst};
    const MlpDenoiser a(spec, 9), b(spec, 9);
    const auto x = random_field({4}, 2);
    EXPECT_EQ(a.predict_epsilon(x, 12.5), b.predict_epsilon(x, 12.5));
    EXPECT_EQ(a.predict_epsilon(x, 12.5), a.predict_epsilon(x, 12.5));
    EXPECT_NE(MlpDenoiser(spec, 10).predict_epsilon(x, 12.5), a.predict_epsilon(x, 12.5));
}

TEST(MlpForward, RejectsMismatch) {
    const MlpDenoiser m(MlpSpec{{3}, {4}}, 1);
    EXPECT_THROW(mlp_forward(m, random_field({4}, 1), 1), ConfigError);
    EXPECT_THROW(mlp_forward(m, random_field({3}, 1), 0), ConfigError);
    EXPECT_THROW(mlp_forward(m, random_field({3}, 1), 1001), ConfigError);
    EXPECT_THROW(mlp_backward(m, random_field({3}, 1), 5, random_field({4}, 1)), ConfigError);
    MlpSpec odd{{3}, {4}};
    odd.time_dim = 5;
    EXPECT_THROW(MlpDenoiser(odd, 1), ConfigError);
    EXPECT_THROW(MlpDenoiser(MlpSpec{{3}, {4}}, std::vector<double>(3, 0.0)), ConfigError);
}

TEST(MlpBackward, ZeroLossGivesZeroGradient) {
    const MlpDenoiser m(MlpSpec{{3}, {6, 5}}, 4);
    const auto x = random_field({3}, 5);
    const auto g = mlp_backward(m, x, 300, mlp_forward(m, x, 300));
    EXPECT_EQ(g.loss, 0.0);
    for (double v : g.params) EXPECT_EQ(v, 0.0);
}

TEST(MlpBackward, ZeroInputColumnHasZeroGradient) {
    const MlpDenoiser m(MlpSpec{{5}, {7}}, 6);
    auto x = random_field({5}, 7);
    x[2] = 0.0;
    const auto g = mlp_backward(m, x, 40, random_field({5}, 8));
    const auto& first = m.layers().front();
    for (std::size_t r = 0; r < first.out; ++r) EXPECT_EQ(g.params[first.weight_offset + r * first.in + 2], 0.0);
}

TEST(MlpBackward, ThreeLayerGradientCheck) {
    const MlpDenoiser m(MlpSpec{{4}, {16, 12}}, 11);
    EXPECT_LT(gradient_check(m, random_field({4}, 1), 250.0, random_field({4}, 2)), 1e-4);
}

TEST(MlpBackward, RandomArchitecturesGradientCheck) {
    CounterRng rng(31);
    for (int trial = 0; trial < 12; ++trial) {
        MlpSpec spec;
        const std::size_t tokens = 1 + rng.below(3);
        const std::size_t dim = 2 * (1 + rng.below(2));
        spec.field_shape = {tokens * dim};
        const std::size_t layers = 2 + rng.below(3);  // dense layers, 2..4
        for (std::size_t l = 0; l + 1 < layers; ++l) spec.hidden.push_back(2 + rng.below(63));
        spec.activation = trial % 2 ? Activation::Tanh : Activation::Silu;
        spec.time_dim = 2 * (1 + rng.below(8));
        if (trial % 3 != 0) {
            const std::size_t heads = rng.below(2) ? 2 : 1;
            spec.attention = MlpAttentionSpec{tokens, heads, tokens % 2 == 0 ? 2u : 1u,
                                              trial % 2 ? AttentionPriority::LocalFirst
                                                        : AttentionPriority::GlobalFirst};
        }
        const MlpDenoiser m(spec, 100 + trial);
        const double t = 1.0 + static_cast<double>(rng.below(1000));
        EXPECT_LT(gradient_check(m, random_field(spec.field_shape, 200 + trial), t,
                                 random_field(spec.field_shape, 300 + trial)),
                  1e-4)
            << "trial " << trial;
    }
}

TEST(Checkpoint, RoundTripIsBitExact) {
    MlpSpec spec{{4, 4}, {32, 16}};
    spec.activation = Activation::Tanh;
    spec.attention = MlpAttentionSpec{4, 2, 2, AttentionPriority::LocalFirst};
    const MlpDenoiser m(spec, 5);
    const auto bytes = encode_checkpoint(m);
    const auto back = decode_checkpoint(bytes);
    EXPECT_EQ(back.spec().field_shape, spec.field_shape);
    EXPECT_EQ(back.spec().hidden, spec.hidden);
    EXPECT_EQ(back.attention_priority(), AttentionPriority::LocalFirst);
    EXPECT_TRUE(std::equal(m.parameters().begin(), m.parameters().end(), back.parameters().begin()));
    const auto x = random_field({4, 4}, 3);
    EXPECT_EQ(back.predict_epsilon(x, 77.0), m.predict_epsilon(x, 77.0));
    EXPECT_EQ(encode_checkpoint(back), bytes);

    const auto path = std::filesystem::temp_directory_path() / "adbd_ckpt_test.bin";
    save_checkpoint(m, path);
    EXPECT_EQ(encode_checkpoint(load_checkpoint(path)), bytes);
    std::filesystem::remove(path);
}

TEST(Checkpoint, HeaderLayout) {
    const MlpDenoiser m(MlpSpec{{3}, {}}, 1);
    const auto bytes = encode_checkpoint(m);
    EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 7), "ADBDMLP");
    EXPECT_EQ(bytes[7], 0);
    EXPECT_EQ(bytes[8], kCheckpointVersion);
    // Trailing payload is the parameter vector as little-endian f64.
    const std::size_t n = m.parameter_count();
    double last = 0.0;
    std::memcpy(&last, bytes.data() + bytes.size() - 8, 8);
    EXPECT_EQ(last, m.parameters()[n - 1]);
}

TEST(Checkpoint, RejectsCorruption) {
    const auto bytes = encode_checkpoint(MlpDenoiser(MlpSpec{{3}, {4}}, 1));
    auto bad_magic = bytes;
    bad_magic[0] = 'X';
    EXPECT_THROW(decode_checkpoint(bad_magic), FormatError);
    auto bad_version = bytes;
    bad_version[8] = 99;
    EXPECT_THROW(decode_checkpoint(bad_version), FormatError);
    EXPECT_THROW(decode_checkpoint(std::vector<std::uint8_t>(bytes.begin(), bytes.end() - 3)), FormatError);
    auto trailing = bytes;
    trailing.push_back(0);
    EXPECT_THROW(decode_checkpoint(trailing), FormatError);
}

}  // namespace
}  // namespace adbd
