#include <gtest/gtest.h>

#include <cmath>

#include "adaptci/weights.hpp"
#include "test_util.hpp"

namespace adaptci {
namespace {

TEST(Allocation, ConstantExamples) {
  EXPECT_EQ(allocation_constant(10, 10), 1.0);
  EXPECT_DOUBLE_EQ(allocation_constant(1, 10), 0.1);
  EXPECT_EQ(allocation_constant(5, 5), 1.0);
  EXPECT_THROW(allocation_constant(0, 5), std::out_of_range);
}

TEST(Allocation, TwoPointExamples) {
  EXPECT_EQ(allocation_two_point(7, 7, 0.3, 0.7), 1.0);
  EXPECT_EQ(allocation_two_point(7, 7, 1.0, 0.2), 1.0);
  for (int t : {1, 5, 9}) EXPECT_DOUBLE_EQ(allocation_two_point(t, 10, 1.0, 0.7), 1.0 / (11 - t));
  EXPECT_NEAR(allocation_two_point(1, 2, 0.5, 0.7), 0.532409070360667641518, 1e-15);
  EXPECT_THROW(allocation_two_point(1, 2, 0.0, 0.7), std::domain_error);
  EXPECT_THROW(allocation_two_point(1, 2, 0.5, 1.0), std::domain_error);
}

TEST(Allocation, TwoPointDegeneratesToConstantAsEGoesToOne) {
  for (int t = 1; t <= 50; ++t) {
    EXPECT_NEAR(allocation_two_point(t, 50, 1.0 - 1e-12, 0.7), allocation_constant(t, 50), 1e-11);
  }
}

TEST(StickBreaking, Examples) {
  auto s = stick_break_step(1.0, 1.0, 0.25);
  EXPECT_EQ(s.h, 0.5);
  EXPECT_EQ(s.budget, 0.0);
  s = stick_break_step(0.6, 0.0, 0.3);
  EXPECT_EQ(s.h, 0.0);
  EXPECT_EQ(s.budget, 0.6);

  BanditHistory h(2);
  const std::vector<double> e = {0.5, 0.5};
  h.append(e, 0, 1.0);
  h.append(e, 1, 1.0);
  const auto sched = build_schedule(h, 0, WeightScheme::kConstantAllocation);
  EXPECT_DOUBLE_EQ(sched.h[0], 0.5);
  EXPECT_DOUBLE_EQ(sched.h[1], 0.5);
  EXPECT_DOUBLE_EQ(sched.h[0] * sched.h[0] / 0.5 + sched.h[1] * sched.h[1] / 0.5, 1.0);
}

TEST(StickBreaking, BudgetExhaustedOnRandomHistories) {
  Rng rng(1);
  for (int trial = 0; trial < 1000; ++trial) {
    const int k = 2 + trial % 3;
    const auto h = testing::random_history(k, 1 + (trial * 37) % 400, rng, 0.001);
    for (auto scheme : {WeightScheme::kConstantAllocation, WeightScheme::kTwoPointAllocation}) {
      const auto s = build_schedule(h, trial % k, scheme);
      double total = 0.0;
      for (int t = 1; t <= h.horizon(); ++t) {
        total += s.h[t - 1] * s.h[t - 1] / h.propensity(t, trial % k);
      }
      ASSERT_NEAR(total, 1.0, 1e-10);
      EXPECT_EQ(s.lambda.back(), 1.0);
      for (int t = 2; t <= h.horizon(); ++t) {
        if (s.lambda[t - 2] > 0.0) {
          EXPECT_LT(s.budget[t - 1], s.budget[t - 2]);
        }
      }
    }
  }
}

TEST(Schedules, ConstantClosedForm) {
  Rng rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    const auto h = testing::random_history(3, 1 + trial * 13, rng);
    const auto s = build_schedule(h, 1, WeightScheme::kConstantAllocation);
    for (int t = 1; t <= h.horizon(); ++t) {
      ASSERT_NEAR(s.h[t - 1], std::sqrt(h.propensity(t, 1) / h.horizon()), 1e-12);
    }
  }
}

TEST(Schedules, UniformIsAllOnes) {
  Rng rng(3);
  const auto h = testing::random_history(2, 30, rng);
  const auto s = build_schedule(h, 0, WeightScheme::kUniform);
  for (double x : s.h) EXPECT_EQ(x, 1.0);
}

TEST(Schedules, SchemeNames) {
  EXPECT_EQ(parse_weight_scheme("two_point"), WeightScheme::kTwoPointAllocation);
  EXPECT_EQ(parse_weight_scheme("constant_alloc"), WeightScheme::kConstantAllocation);
  EXPECT_EQ(weight_scheme_name(WeightScheme::kUniform), "uniform");
  EXPECT_THROW(parse_weight_scheme("linear"), std::invalid_argument);
}

TEST(Allocation, LowerBoundInequalityOnGrid) {
  long checked = 0;
  testing::for_grid([&](int t, int horizon, double alpha) {
    EXPECT_LE(1.0 / (1.0 + horizon - t), allocation_decay_branch(t, horizon, alpha) * (1 + 1e-14))
        << t << " " << horizon << " " << alpha;
    ++checked;
  });
  EXPECT_EQ(checked, 10000);
}

TEST(Allocation, RatesLieBetweenBounds) {
  // With e_t >= C t^-alpha, constant allocation satisfies the upper bound
  // with C' = 1/C and two-point allocation with C' = 1 + 1/C.
  const double c = 1.0 / 3.0;
  Rng rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  testing::for_grid([&](int t, int horizon, double alpha) {
    const double e_min = std::min(1.0, c * std::pow(t, -alpha));
    for (double e : {e_min, e_min + (1.0 - e_min) * u(rng)}) {
      if (t < horizon) {
        EXPECT_TRUE(check_allocation_bounds(allocation_constant(t, horizon), t, horizon, e, alpha,
                                            (1.0 + 1e-12) / c))
            << t << " " << horizon << " " << alpha << " " << e;
      }
      EXPECT_TRUE(check_allocation_bounds(allocation_two_point(t, horizon, e, alpha), t, horizon, e,
                                          alpha, (1.0 + 1e-12) * (1.0 + 1.0 / c)))
          << t << " " << horizon << " " << alpha << " " << e;
    }
  });
  EXPECT_FALSE(check_allocation_bounds(0.0, 3, 10, 0.5, 0.7, 100.0));
}

TEST(Diagnostics, ConstantAllocationOnFixedDesign) {
  BanditHistory h(2);
  const std::vector<double> e = {0.5, 0.5};
  for (int t = 0; t < 100; ++t) h.append(e, t % 2, 1.0);
  const auto d = weight_diagnostics(h, build_schedule(h, 0, WeightScheme::kConstantAllocation));
  EXPECT_NEAR(d.variance_sum, 1.0, 1e-12);
  EXPECT_NEAR(d.effective_sample_size, 50.0, 1e-9);
}

}  // namespace
}  // namespace adaptci
