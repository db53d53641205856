#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include <adbd/denoiser.hpp>
#include <adbd/domains.hpp>
#include <adbd/errors.hpp>
#include <adbd/fft.hpp>
#include <adbd/rng.hpp>
#include <adbd/softlabel.hpp>

namespace adbd {
namespace {

using cd = std::complex<double>;

// O(N^2) DFT straight from the definition.
std::vector<cd> direct_dft(const Field& x) {
    const std::size_t H = x.height(), W = x.width();
    std::vector<cd> out(H * W);
    for (std::size_t u = 0; u < H; ++u)
        for (std::size_t v = 0; v < W; ++v) {
            cd acc = 0.0;
            for (std::size_t y = 0; y < H; ++y)
                for (std::size_t c = 0; c < W; ++c) {
                    const double ang = -2.0 * std::numbers::pi *
                                       (static_cast<double>(u * y) / H + static_cast<double>(v * c) / W);
                    acc += x.at(y, c) * cd(std::cos(ang), std::sin(ang));
                }
            out[u * W + v] = acc;
        }
    return out;
}

double direct_highpass(const Field& x, double cutoff) {
    const auto spec = direct_dft(x);
    const std::size_t H = x.height(), W = x.width();
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t u = 0; u < H; ++u)
        for (std::size_t v = 0; v < W; ++v) {
            const double fy = (u <= H / 2 ? double(u) : double(u) - double(H)) / H;
            const double fx = (v <= W / 2 ? double(v) : double(v) - double(W)) / W;
            if (std::hypot(fy, fx) / 0.5 >= cutoff) {
                sum += std::abs(spec[u * W + v]);
                ++count;
            }
        }
    return sum / count;
}

Field random_image(std::size_t h, std::size_t w, std::uint64_t seed) {
    CounterRng rng(seed);
    Field f({h, w});
    for (auto& v : f.values()) v = 2.0 * rng.uniform() - 1.0;
    return f;
}

Field cosine(std::size_t n, std::size_t ky, std::size_t kx, double amplitude) {
    Field f({n, n});
    for (std::size_t y = 0; y < n; ++y)
        for (std::size_t x = 0; x < n; ++x)
            f.at(y, x) = amplitude * std::cos(2.0 * std::numbers::pi * double(ky * y + kx * x) / double(n));
    return f;
}

std::size_t passed_bins(std::size_t h, std::size_t w, const HighpassSpec& spec) {
    std::size_t n = 0;
    for (auto m : highpass_mask(h, w, spec)) n += m;
    return n;
}

TEST(Fft, MatchesDirectDft) {
    const auto x = random_image(8, 6, 3);
    const auto fast = fft::forward_2d(x.values(), 8, 6);
    const auto slow = direct_dft(x);
    for (std::size_t i = 0; i < slow.size(); ++i) EXPECT_LT(std::abs(fast[i] - slow[i]), 1e-12);
    const auto back = fft::inverse_2d_real(fast, 8, 6);
    for (std::size_t i = 0; i < back.size(); ++i) EXPECT_NEAR(back[i], x[i], 1e-14);
}

TEST(HighpassMask, SymmetricAndExcludesDc) {
    for (double cutoff : {0.01, 0.25, 0.7}) {
        const HighpassSpec spec{cutoff};
        const auto m = highpass_mask(16, 12, spec);
        EXPECT_EQ(m[0], 0);
        for (std::size_t u = 0; u < 16; ++u)
            for (std::size_t v = 0; v < 12; ++v)
                EXPECT_EQ(m[u * 12 + v], m[fft::mirror_bin(u, 16) * 12 + fft::mirror_bin(v, 12)]);
    }
}

TEST(HighpassMagnitude, ConstantImageIsZero) {
    EXPECT_NEAR(highpass_magnitude(Field::filled({16, 16}, 0.7), HighpassSpec{}), 0.0, 1e-12);
}

TEST(HighpassMagnitude, CosineAboveCutoffMatchesDirectDft) {
    const HighpassSpec spec{0.25};
    const double a = 0.6;
    const auto img = cosine(32, 3, 9, a);
    const double measured = highpass_magnitude(img, spec);
    EXPECT_NEAR(measured, direct_highpass(img, 0.25), 1e-10);
    // Two conjugate spikes of modulus a HW / 2 each.
    EXPECT_NEAR(measured, a * 32.0 * 32.0 / static_cast<double>(passed_bins(32, 32, spec)), 1e-10);
}

TEST(HighpassMagnitude, CosineBelowCutoffIsZero) {
    EXPECT_NEAR(highpass_magnitude(cosine(32, 1, 1, 0.9), HighpassSpec{0.25}), 0.0, 1e-12);
}

TEST(HighpassMagnitude, MatchesDirectDftOnRandomImages) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto img = random_image(12, 10, seed);
        EXPECT_NEAR(highpass_magnitude(img, HighpassSpec{0.3}), direct_highpass(img, 0.3), 1e-10);
    }
}

TEST(HighpassMagnitude, TranslationInvariant) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto img = random_image(16, 16, seed);
        Field shifted({16, 16});
        for (std::size_t y = 0; y < 16; ++y)
            for (std::size_t x = 0; x < 16; ++x) shifted.at((y + 5) % 16, (x + 11) % 16) = img.at(y, x);
        EXPECT_NEAR(highpass_magnitude(shifted, HighpassSpec{}), highpass_magnitude(img, HighpassSpec{}), 1e-9);
    }
}

TEST(HighpassMagnitude, ScalesLinearly) {
    const auto img = random_image(16, 16, 4);
    const double base = highpass_magnitude(img, HighpassSpec{});
    for (double c : {-2.5, 0.3, 4.0}) {
        Field scaled = img;
        for (auto& v : scaled.values()) v *= c;
        EXPECT_NEAR(highpass_magnitude(scaled, HighpassSpec{}), std::abs(c) * base, 1e-9);
    }
}

TEST(HighpassMagnitude, RejectsDegenerateInput) {
    EXPECT_THROW(highpass_magnitude(Field::point({1.0, 2.0}), HighpassSpec{}), ConfigError);
    EXPECT_THROW(highpass_magnitude(Field::filled({1, 8}, 0.0), HighpassSpec{}), ConfigError);
    EXPECT_THROW(highpass_magnitude(Field::filled({8, 8}, 0.0), HighpassSpec{0.0}), ConfigError);
    EXPECT_THROW(highpass_magnitude(Field::filled({8, 8}, 0.0), HighpassSpec{1.0}), ConfigError);
    // Corner radius is sqrt(2) of Nyquist, so 0.999 still passes bins.
    EXPECT_GT(passed_bins(8, 8, HighpassSpec{0.999}), 0u);
}

TEST(SoftLabel, EndpointsAndSubstitution) {
    EXPECT_EQ(soft_label(10.0, 10.0, 2.0).value, 0.0);
    EXPECT_EQ(soft_label(10.0, 2.0, 2.0).value, 1.0);
    EXPECT_EQ(soft_label(10.0, 6.0, 2.0).value, 0.5);
    EXPECT_EQ(soft_label(2.0, 2.0, 10.0).value, 0.0);
    EXPECT_EQ(soft_label(2.0, 10.0, 10.0).value, 1.0);
    EXPECT_FALSE(std::signbit(soft_label(3.0, 3.0, 1.0).value));
}

TEST(SoftLabel, EndpointIdentitiesOverRandomInputs) {
    CounterRng rng(12);
    for (int i = 0; i < 1000; ++i) {
        const double as = 10.0 * rng.uniform(), at = 10.0 * rng.uniform();
        if (std::abs(as - at) < 1e-6) continue;
        EXPECT_EQ(soft_label(as, as, at).value, 0.0);
        EXPECT_EQ(soft_label(as, at, at).value, 1.0);
    }
}

TEST(SoftLabel, ClampsAndKeepsRaw) {
    const auto over = soft_label(10.0, 0.0, 2.0);
    EXPECT_EQ(over.value, 1.0);
    EXPECT_DOUBLE_EQ(over.raw, 1.25);
    const auto under = soft_label(10.0, 12.0, 2.0);
    EXPECT_EQ(under.value, 0.0);
    EXPECT_DOUBLE_EQ(under.raw, -0.25);
}

TEST(SoftLabel, IndistinguishableEndpoints) {
    EXPECT_THROW(soft_label(1.0, 0.5, 1.0), NumericalError);
    EXPECT_THROW(soft_label(1e6, 1.0, 1e6 + 1e-4), NumericalError);
    EXPECT_NO_THROW(soft_label(1.0, 0.5, 1.0 + 1e-8));
    EXPECT_THROW(soft_label(NAN, 0.5, 1.0), NumericalError);
}

TEST(LabelIntermediate, Endpoints) {
    const auto xs = random_image(16, 16, 1), xt = cosine(16, 5, 3, 0.8);
    EXPECT_EQ(label_intermediate(xs, xs, xt, HighpassSpec{}).label.value, 0.0);
    EXPECT_EQ(label_intermediate(xt, xs, xt, HighpassSpec{}).label.value, 1.0);
}

TEST(LabelIntermediate, MeanSpectrumGivesHalf) {
    // Disjoint passed-band supports make |X_mid| the mean of the endpoint
    // magnitudes bin by bin, so A_mid is the mean of A_s and A_t.
    const auto xs = cosine(32, 0, 9, 0.4);
    const auto xt = cosine(32, 11, 2, 0.9);
    Field mid({32, 32});
    for (std::size_t i = 0; i < mid.size(); ++i) mid[i] = 0.5 * (xs[i] + xt[i]);
    const auto m = label_intermediate(mid, xs, xt, HighpassSpec{});
    EXPECT_NEAR(m.label.value, 0.5, 1e-9);
}

TEST(LabelIntermediate, InvariantUnderGlobalTransformScale) {
    const auto xs = random_image(16, 16, 2), xt = cosine(16, 6, 1, 0.9);
    Field xi({16, 16});
    for (std::size_t i = 0; i < xi.size(); ++i) xi[i] = 0.3 * xs[i] + 0.7 * xt[i];
    const auto plain = label_intermediate(xi, xs, xt, HighpassSpec{});
    // An orthonormal transform rescales every magnitude by 1 / sqrt(HW).
    const double c = 1.0 / 16.0;
    const auto rescaled = soft_label(c * plain.a_source, c * plain.a_intermediate, c * plain.a_target);
    EXPECT_NEAR(rescaled.raw, plain.label.raw, 1e-12);
}

TEST(SelectDepth, TiesGoToSmallerDepth) {
    std::vector<SweepPoint> sweep(3);
    const double depths[] = {0.2, 0.5, 0.8};
    const double labels[] = {0.25, 0.75, 0.25};  // exact gaps of 0.25 from 0.5
    for (int k = 0; k < 3; ++k) {
        sweep[k].depth = depths[k];
        sweep[k].measurement.label.value = labels[k];
        sweep[k].frame = Field::filled({2, 2}, double(k));
    }
    const auto c = select_depth(0.5, sweep);
    EXPECT_EQ(c.depth, 0.2);
    EXPECT_EQ(c.frame, sweep[0].frame);
    EXPECT_EQ(select_depth(0.7, sweep).depth, 0.5);
    EXPECT_THROW(select_depth(1.5, sweep), ConfigError);
    EXPECT_THROW(select_depth(0.5, {}), ConfigError);
}

class Calibration : public ::testing::Test {
protected:
    void SetUp() override {
        pair = make_texture_pair("stripes", 16, 3);
        const auto schedule = linear_schedule(1000, 1e-4, 0.02);
        src = make_analytic_model(pair.source, schedule);
        tgt = make_analytic_model(pair.target, schedule);
        cfg = BridgeConfig{schedule, 200};
        x = sample_domain(pair.source, 1, 4).front();
        ref = ubdp_migrate(x, *src, *tgt, cfg).migrated;
    }
    DomainPair pair;
    std::unique_ptr<EpsilonModel> src, tgt;
    BridgeConfig cfg{linear_schedule(1, 0.1, 0.1)};
    Field x, ref;
};

TEST_F(Calibration, EndpointTargets) {
    const auto grid = uniform_depth_grid(17);
    const auto zero = calibrate_depth(0.0, x, ref, *src, *tgt, cfg, grid, HighpassSpec{});
    EXPECT_EQ(zero.depth, 0.0);
    EXPECT_EQ(zero.measurement.label.value, 0.0);
    EXPECT_EQ(zero.frame, x);
    const auto one = calibrate_depth(1.0, x, ref, *src, *tgt, cfg, grid, HighpassSpec{});
    EXPECT_EQ(one.depth, 1.0);
    EXPECT_EQ(one.measurement.label.value, 1.0);
}

TEST_F(Calibration, HalfIsBestOnGrid) {
    const auto c = calibrate_depth(0.5, x, ref, *src, *tgt, cfg, uniform_depth_grid(17), HighpassSpec{});
    ASSERT_EQ(c.sweep.size(), 17u);
    double best = INFINITY;
    for (const auto& p : c.sweep) best = std::min(best, std::abs(p.measurement.label.value - 0.5));
    EXPECT_LE(std::abs(c.measurement.label.value - 0.5), best);
}

TEST_F(Calibration, DegenerateEndpointsPropagate) {
    EXPECT_THROW(calibrate_depth(0.5, x, x, *src, *tgt, cfg, uniform_depth_grid(5), HighpassSpec{}),
                 NumericalError);
    EXPECT_THROW(calibrate_depth(0.5, x, ref, *src, *tgt, cfg, {}, HighpassSpec{}), ConfigError);
}

TEST(DepthGrid, Uniform) {
    const auto g = uniform_depth_grid(17);
    ASSERT_EQ(g.size(), 17u);
    EXPECT_EQ(g.front(), 0.0);
    EXPECT_EQ(g.back(), 1.0);
    EXPECT_EQ(g[8], 0.5);
    EXPECT_THROW(uniform_depth_grid(1), ConfigError);
}

}  // namespace
}  // namespace adbd
