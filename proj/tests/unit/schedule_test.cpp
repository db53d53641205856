#include <gtest/gtest.h>

#include <cmath>

#include <adbd/errors.hpp>
#include <adbd/schedule.hpp>

namespace adbd {
namespace {

TEST(LinearSchedule, SingleStep) {
    const auto s = linear_schedule(1, 0.1, 0.1);
    ASSERT_EQ(s.steps(), 1u);
    EXPECT_DOUBLE_EQ(s.beta(1), 0.1);
    EXPECT_EQ(s.alpha_bar(0), 1.0);
    EXPECT_DOUBLE_EQ(s.alpha_bar(1), 0.9);
}

TEST(LinearSchedule, TwoSteps) {
    const auto s = linear_schedule(2, 0.1, 0.3);
    EXPECT_DOUBLE_EQ(s.beta(1), 0.1);
    EXPECT_DOUBLE_EQ(s.beta(2), 0.3);
    EXPECT_NEAR(s.alpha_bar(2), 0.63, 1e-15);
}

TEST(LinearSchedule, DefaultMatchesExtendedPrecisionProduct) {
    const auto s = linear_schedule(1000, 1e-4, 0.02);
    long double product = 1.0L;
    for (int t = 1; t <= 1000; ++t) {
        const long double beta = 1e-4L + (0.02L - 1e-4L) * static_cast<long double>(t - 1) / 999.0L;
        product *= 1.0L - beta;
    }
    EXPECT_NEAR(s.alpha_bar(1000) / static_cast<double>(product), 1.0, 1e-12);
    EXPECT_DOUBLE_EQ(s.beta(1000), 0.02);
}

TEST(LinearSchedule, StoredProductsAreExactRecurrence) {
    const auto s = linear_schedule(1000, 1e-4, 0.02);
    for (std::size_t t = 1; t <= s.steps(); ++t) {
        ASSERT_EQ(s.alpha_bar(t), s.alpha_bar(t - 1) * s.alpha(t)) << "t=" << t;
        ASSERT_LT(s.alpha_bar(t), s.alpha_bar(t - 1));
        ASSERT_TRUE(std::isfinite(std::sqrt(s.alpha_bar(t))) && std::sqrt(s.alpha_bar(t)) > 0.0);
        ASSERT_GT(std::sqrt(1.0 - s.alpha_bar(t)), 0.0);
    }
}

TEST(LinearSchedule, RejectsBadArguments) {
    EXPECT_THROW(linear_schedule(0, 1e-4, 0.02), ConfigError);
    EXPECT_THROW(linear_schedule(10, 0.0, 0.02), ConfigError);
    EXPECT_THROW(linear_schedule(10, 0.03, 0.02), ConfigError);
    EXPECT_THROW(linear_schedule(10, 1e-4, 1.0), ConfigError);
    EXPECT_THROW(linear_schedule(10, std::nan(""), 0.02), ConfigError);
    EXPECT_THROW(linear_schedule(10, 1e-4, INFINITY), ConfigError);
    EXPECT_THROW(NoiseSchedule::from_betas({0.1, 1.0}), ConfigError);
    EXPECT_THROW(NoiseSchedule::from_betas({}), ConfigError);
}

TEST(StateCoordinate, Examples) {
    const auto s = linear_schedule(1000, 1e-4, 0.02);
    EXPECT_EQ(state_coordinate(0, s), 0.0);
    EXPECT_EQ(state_coordinate(1000, s), 1.0);
    EXPECT_EQ(state_coordinate(350, s), 0.35);
    EXPECT_THROW(state_coordinate(1001, s), ConfigError);
}

TEST(ContinuousSchedule, IntegersReproduceTable) {
    const auto s = linear_schedule(1000, 1e-4, 0.02);
    for (std::size_t t = 0; t <= 1000; t += 37) {
        EXPECT_EQ(s.alpha_bar_at(static_cast<double>(t)), s.alpha_bar(t));
    }
    EXPECT_EQ(s.alpha_bar_at(1000.0), s.alpha_bar(1000));
}

TEST(ContinuousSchedule, LogLinearBetweenSteps) {
    const auto s = linear_schedule(1000, 1e-4, 0.02);
    const double mid = s.log_alpha_bar_at(412.5);
    EXPECT_NEAR(mid, 0.5 * (std::log(s.alpha_bar(412)) + std::log(s.alpha_bar(413))), 1e-14);
    EXPECT_LT(s.alpha_bar_at(412.5), s.alpha_bar(412));
    EXPECT_GT(s.alpha_bar_at(412.5), s.alpha_bar(413));
}

TEST(ContinuousSchedule, DecayRateIsSecantOfLogAlphaBar) {
    const auto s = linear_schedule(1000, 1e-4, 0.02);
    EXPECT_NEAR(s.decay_rate(10.0, 11.0), std::log(s.alpha_bar(10)) - std::log(s.alpha_bar(11)), 1e-15);
    const double span = s.decay_rate(3.5, 7.25);
    EXPECT_NEAR(span, (s.log_alpha_bar_at(3.5) - s.log_alpha_bar_at(7.25)) / 3.75, 1e-15);
    EXPECT_GT(s.decay_rate(500.0, 500.0), 0.0);
}

}  // namespace
}  // namespace adbd
