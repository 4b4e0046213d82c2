#include <gtest/gtest.h>

#include <cmath>

#include "adaptci/environment.hpp"

namespace adaptci {
namespace {

TEST(Environment, SettingMeans) {
  EXPECT_EQ(make_setting("no_signal").arm_means(), (std::vector<double>{1, 1, 1}));
  const auto low = make_setting("low_signal").arm_means();
  EXPECT_DOUBLE_EQ(low[0], 1.0);
  EXPECT_DOUBLE_EQ(low[1], 1.1);
  EXPECT_DOUBLE_EQ(low[2], 1.2);
  EXPECT_EQ(make_setting("high_signal").arm_means(), (std::vector<double>{1.0, 1.5, 2.0}));
  EXPECT_EQ(make_setting("intro_normal").num_arms(), 2);
  EXPECT_THROW(make_setting("nope"), std::invalid_argument);
  EXPECT_THROW(make_setting("no_signal").arm_mean(3), std::out_of_range);
}

TEST(Environment, ZeroNoiseIsDegenerate) {
  ArmOutcomeModel model({1, 1, 1}, UniformNoise{0.0});
  Rng rng(1);
  EXPECT_EQ(draw_reward(model, 0, rng), 1.0);
}

TEST(Environment, SupportAndVariance) {
  const auto m = make_setting("high_signal");
  EXPECT_NEAR(m.noise_variance(), 1.0 / 3.0, 1e-15);
  ASSERT_TRUE(m.support(2).has_value());
  EXPECT_EQ(m.support(2)->lo, 1.0);
  EXPECT_EQ(m.support(2)->hi, 3.0);
  EXPECT_FALSE(make_setting("intro_normal").support(0).has_value());
}

TEST(Environment, LawOfLargeNumbers) {
  const auto m = make_setting("high_signal");
  Rng rng(42);
  constexpr int n = 1000000;
  double sum = 0.0;
  double sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double y = draw_reward(m, 2, rng);
    sum += y;
    sum2 += y * y;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  EXPECT_NEAR(mean, 2.0, 5.0 * std::sqrt(1.0 / 3.0 / n));
  EXPECT_NEAR(var, 1.0 / 3.0, 0.01 / 3.0);
}

TEST(Environment, NormalNoiseMoments) {
  const auto m = make_setting("intro_normal");
  Rng rng(7);
  constexpr int n = 1000000;
  double sum = 0.0;
  double sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double y = draw_reward(m, 0, rng);
    sum += y;
    sum2 += y * y;
  }
  EXPECT_NEAR(sum / n, 0.0, 5.0 / std::sqrt(n));
  EXPECT_NEAR(sum2 / n - (sum / n) * (sum / n), 1.0, 0.01);
}

TEST(Environment, SameSeedSameStream) {
  const auto m = make_setting("low_signal");
  Rng a(9);
  Rng b(9);
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(draw_reward(m, i % 3, a), draw_reward(m, i % 3, b));
}

}  // namespace
}  // namespace adaptci
