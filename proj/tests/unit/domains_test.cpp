#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include <adbd/domains.hpp>
#include <adbd/errors.hpp>
#include <adbd/fft.hpp>
#include <adbd/softlabel.hpp>
#include <adbd/spectral_field.hpp>

namespace adbd {
namespace {

double mean_highpass(const std::vector<Field>& xs) {
    double s = 0.0;
    for (const auto& x : xs) s += highpass_magnitude(x, HighpassSpec{});
    return s / static_cast<double>(xs.size());
}

class TexturePair : public ::testing::TestWithParam<std::string> {};

TEST_P(TexturePair, SourceHighpassBelowTenPercentOfTarget) {
    for (std::uint64_t seed : {0u, 1u, 7u}) {
        const auto pair = make_texture_pair(GetParam(), 32, seed);
        const double src = mean_highpass(sample_domain(pair.source, 32, 100 + seed));
        const double tgt = mean_highpass(sample_domain(pair.target, 32, 200 + seed));
        EXPECT_LT(src, 0.10 * tgt) << GetParam() << " seed " << seed;
    }
}

TEST_P(TexturePair, DeterministicAndNormalized) {
    const auto a = make_texture_pair(GetParam(), 16, 4);
    const auto b = make_texture_pair(GetParam(), 16, 4);
    EXPECT_EQ(std::get<SpectralField>(a.target).spectrum, std::get<SpectralField>(b.target).spectrum);
    const auto xs = sample_domain(a.target, 20, 1);
    EXPECT_EQ(xs, sample_domain(b.target, 20, 1));
    for (const auto& x : xs) {
        ASSERT_EQ(x.shape(), (std::vector<std::size_t>{16, 16}));
        for (double v : x.values()) {
            ASSERT_GE(v, -1.0);
            ASSERT_LE(v, 1.0);
        }
    }
}

INSTANTIATE_TEST_SUITE_P(Kinds, TexturePair, ::testing::Values("stripes", "checker", "speckle"));

TEST(TexturePairErrors, RejectsBadArguments) {
    EXPECT_THROW(make_texture_pair("plaid", 32, 0), ConfigError);
    EXPECT_THROW(make_texture_pair("stripes", 24, 0), ConfigError);
    EXPECT_THROW(make_texture_pair("stripes", 8, 0), ConfigError);
}

TEST(DefaultGmmPair, DisjointThreeComponentDomains) {
    const auto pair = default_gmm_pair();
    pair.validate();
    const auto& a = std::get<GaussianMixture>(pair.source);
    const auto& b = std::get<GaussianMixture>(pair.target);
    EXPECT_EQ(a.components(), 3u);
    EXPECT_EQ(b.components(), 3u);
    EXPECT_EQ(pair.shape, (std::vector<std::size_t>{2}));
    for (const auto& ma : a.means) {
        for (const auto& mb : b.means) {
            const double d = std::hypot(ma[0] - mb[0], ma[1] - mb[1]);
            EXPECT_GT(d, 4.0 * std::sqrt(std::max(a.variances[0], b.variances[0])));
        }
    }
}

TEST(SpectralField, SampleCovarianceMatchesSpectrum) {
    SpectralField f;
    f.height = f.width = 8;
    f.mean.assign(64, 0.0);
    f.spectrum.assign(64, 0.0);
    for (std::size_t u = 0; u < 8; ++u) {
        for (std::size_t v = 0; v < 8; ++v) {
            const double fy = fft::bin_frequency(u, 8), fx = fft::bin_frequency(v, 8);
            f.spectrum[u * 8 + v] = 0.01 + 0.05 * std::exp(-10.0 * (fy * fy + fx * fx));
        }
    }
    f.validate();
    const auto xs = spectral_field_sample(f, 4000, 3, -1e9, 1e9);
    // Per-bin power E|X|^2 = HW * lambda for the unnormalized transform.
    std::vector<double> power(64, 0.0);
    for (const auto& x : xs) {
        const auto spec = fft::forward_2d(x.values(), 8, 8);
        for (std::size_t i = 0; i < 64; ++i) power[i] += std::norm(spec[i]) / 4000.0;
    }
    for (std::size_t i = 0; i < 64; ++i) {
        EXPECT_NEAR(power[i] / (64.0 * f.spectrum[i]), 1.0, 0.1) << "bin " << i;
    }
}

TEST(SpectralField, LogDensityMatchesDenseGaussian) {
    // 2x2: the DFT basis is real (Hadamard rows), so the dense Gaussian with
    // covariance F^H diag(lambda) F / (HW) is easy to write out.
    SpectralField f;
    f.height = f.width = 2;
    f.mean = {0.1, -0.2, 0.0, 0.3};
    f.spectrum = {0.5, 0.2, 0.3, 0.1};
    f.validate();
    const double H[4][4] = {{1, 1, 1, 1}, {1, -1, 1, -1}, {1, 1, -1, -1}, {1, -1, -1, 1}};
    const Field x({2, 2}, {0.4, 0.1, -0.5, 0.2});
    // Inverse covariance: sum_k H_k H_k^T / (4 lambda_k).
    double quad = 0.0;
    for (int k = 0; k < 4; ++k) {
        double proj = 0.0;
        for (int i = 0; i < 4; ++i) proj += H[k][i] * (x[i] - f.mean[i]);
        quad += proj * proj / (4.0 * f.spectrum[k]);
    }
    double logdet = 0.0;
    for (double l : f.spectrum) logdet += std::log(l);
    const double expected = -0.5 * quad - 0.5 * logdet - 2.0 * std::log(2.0 * std::numbers::pi);
    EXPECT_NEAR(spectral_log_density(f, x), expected, 1e-12);
}

TEST(SpectralField, ScoreMatchesFiniteDifference) {
    const auto pair = make_texture_pair("checker", 16, 2);
    const auto& f = std::get<SpectralField>(pair.target);
    const auto s = linear_schedule(1000, 1e-4, 0.02);
    const auto noised = noised_spectral_field_at(f, s, 120.0);
    auto x = sample_domain(pair.source, 1, 5).front();
    const auto score = spectral_score(noised, x);
    const double h = 1e-4;
    for (std::size_t i : {0u, 17u, 100u, 255u}) {
        Field up = x, down = x;
        up[i] += h;
        down[i] -= h;
        const double fd = (spectral_log_density(noised, up) - spectral_log_density(noised, down)) / (2.0 * h);
        EXPECT_NEAR(score[i], fd, 1e-5 * std::max(1.0, std::abs(fd)));
    }
}

TEST(SpectralField, RejectsAsymmetricSpectrum) {
    SpectralField f;
    f.height = f.width = 4;
    f.mean.assign(16, 0.0);
    f.spectrum.assign(16, 1.0);
    f.spectrum[1] = 2.0;  // its mirror, bin 3, stays 1
    EXPECT_THROW(f.validate(), ConfigError);
}

}  // namespace
}  // namespace adbd
