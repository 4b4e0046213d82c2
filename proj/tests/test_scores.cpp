#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "adaptci/designs.hpp"
#include "adaptci/environment.hpp"
#include "adaptci/replication.hpp"
#include "adaptci/scores.hpp"
#include "test_util.hpp"

namespace adaptci {
namespace {

StepRecord record(const std::vector<double>& e, int arm, double y) {
  return StepRecord{1, e, arm, y};
}

TEST(Scores, IpwExamples) {
  const std::vector<double> e = {0.5, 0.5};
  EXPECT_EQ(ipw_score(record(e, 1, 3.0), 0), 0.0);
  EXPECT_EQ(ipw_score(record(e, 0, 1.0), 0), 2.0);
  const std::vector<double> one = {1.0, 0.0};
  EXPECT_EQ(ipw_score(record(one, 0, 1.7), 0), 1.7);
  EXPECT_THROW(ipw_score(record(one, 0, 1.7), 1), std::domain_error);
}

TEST(Scores, AipwExamples) {
  const std::vector<double> one = {1.0, 0.0};
  EXPECT_EQ(aipw_score(record(one, 0, 1.7), 0, 123.0), 1.7);
  const std::vector<double> e = {0.25, 0.75};
  EXPECT_EQ(aipw_score(record(e, 1, 9.0), 0, 0.6), 0.6);
  EXPECT_EQ(aipw_score(record(e, 0, 2.0), 0, 1.0), 5.0);
}

TEST(Scores, ContrastExamples) {
  const std::vector<double> e = {0.3, 0.7};
  const auto r = record(e, 1, 2.5);
  EXPECT_EQ(contrast_score(r, 1, 1, 1.2, 1.2), 0.0);
  EXPECT_DOUBLE_EQ(contrast_score(r, 1, 0, 1.2, 0.4),
                   aipw_score(r, 1, 1.2) - aipw_score(r, 0, 0.4));
  // W_t = w1 with e(w1) = 1: Y_t - m(w2). e(w2) = 0 exactly would make the
  // w2 score undefined, so it gets the smallest positive mass that still
  // rounds e(w1) to 1.
  const std::vector<double> almost = {1.0, 1e-300};
  EXPECT_DOUBLE_EQ(contrast_score(record(almost, 0, 2.0), 0, 1, 0.4, 1.2), 2.0 - 1.2);
  const std::vector<double> sure = {1.0, 0.0};
  EXPECT_THROW(contrast_score(record(sure, 0, 2.0), 0, 1, 0.4, 1.2), std::domain_error);
}

TEST(Scores, ZeroPlugInAipwIsIpw) {
  Rng rng(1);
  const auto h = testing::random_history(3, 400, rng);
  for (int w = 0; w < 3; ++w) {
    const auto ipw = arm_scores(h, w, ScoreKind::kIpw);
    const auto aipw0 = arm_scores(h, w, ScoreKind::kAipw, PlugIn::zero());
    EXPECT_EQ(ipw.values, aipw0.values);
  }
}

TEST(Scores, RunningMeanPlugInIsLagged) {
  Rng rng(2);
  const auto h = testing::random_history(2, 200, rng);
  const auto m = plug_in_series(h, 0, PlugIn::running_mean());
  EXPECT_EQ(m, lagged_means(h, 0));
  const auto aipw = arm_scores(h, 0, ScoreKind::kAipw);
  for (int t = 1; t <= h.horizon(); ++t) {
    EXPECT_DOUBLE_EQ(aipw.values[t - 1], aipw_score(h.step(t), 0, m[t - 1]));
  }
}

TEST(Scores, ConditionalUnbiasedness) {
  // Fixed e_t and plug-in; average the AIPW score over the exact assignment
  // law (sum over arms) and the reward noise (Monte Carlo).
  const auto model = make_setting("low_signal");
  const std::vector<double> e = {0.05, 0.25, 0.7};
  const double plug_in = 0.3;
  Rng rng(3);
  constexpr int n = 1000000;
  for (int target = 0; target < 3; ++target) {
    double sum = 0.0;
    double sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
      double g = 0.0;
      for (int w = 0; w < 3; ++w) {
        g += e[w] * aipw_score(record(e, w, draw_reward(model, w, rng)), target, plug_in);
      }
      sum += g;
      sum2 += g * g;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sum2 / n - mean * mean) / n);
    EXPECT_NEAR(mean, model.arm_mean(target), 4 * se + 1e-12);
  }
}

TEST(Scores, UnweightedAipwUnbiasedOverShortAdaptiveRuns) {
  const auto model = make_setting("low_signal");
  ThompsonFloorParams params;
  params.num_draws = 0;
  constexpr long reps = 100000;
  constexpr int horizon = 100;
  std::vector<double> sum(3, 0.0);
  std::vector<double> sum2(3, 0.0);
  for (long r = 0; r < reps; ++r) {
    const auto h = run_design(model, params, horizon, 77, r);
    for (int w = 0; w < 3; ++w) {
      const auto s = arm_scores(h, w, ScoreKind::kAipw);
      const double q = std::accumulate(s.values.begin(), s.values.end(), 0.0) / horizon;
      sum[w] += q;
      sum2[w] += q * q;
    }
  }
  for (int w = 0; w < 3; ++w) {
    const double mean = sum[w] / reps;
    const double se = std::sqrt((sum2[w] / reps - mean * mean) / reps);
    EXPECT_NEAR(mean, model.arm_mean(w), 4 * se) << "arm " << w;
  }
}

TEST(Targets, ParseAndLabel) {
  EXPECT_EQ(target_label(parse_target("arm:2")), "arm:2");
  EXPECT_EQ(target_label(parse_target("contrast:2-0")), "contrast:2-0");
  EXPECT_THROW(parse_target("arm:x"), std::invalid_argument);
  EXPECT_THROW(parse_target("delta:1"), std::invalid_argument);
}

}  // namespace
}  // namespace adaptci
