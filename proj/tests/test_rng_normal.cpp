#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "adaptci/normal.hpp"
#include "adaptci/rng.hpp"

namespace adaptci {
namespace {

TEST(Rng, ReplicationSeedIsDeterministicAndSpreads) {
  EXPECT_EQ(replication_seed(7, 3), replication_seed(7, 3));
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(replication_seed(7, i));
  EXPECT_EQ(seen.size(), 1000u);
  EXPECT_NE(replication_seed(7, 0), replication_seed(8, 0));
}

TEST(Rng, StreamsAreIndependentOfEachOther) {
  const auto s = replication_seed(1, 0);
  EXPECT_NE(stream_seed(s, Stream::kEnvironment), stream_seed(s, Stream::kDesign));
  EXPECT_NE(stream_seed(s, Stream::kDesign), stream_seed(s, Stream::kPosterior));
  auto a = ReplicationStreams::for_replication(1, 5);
  auto b = ReplicationStreams::for_replication(1, 5);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(a.environment(), b.environment());
    EXPECT_EQ(a.design(), b.design());
  }
}

TEST(Normal, QuantileOracles) {
  EXPECT_NEAR(normal_quantile(0.975), 1.95996398454005423552, 1e-13);
  EXPECT_NEAR(normal_quantile(0.95), 1.64485362695147271486, 1e-13);
  EXPECT_NEAR(normal_quantile(0.025), -1.95996398454005423552, 1e-13);
  EXPECT_DOUBLE_EQ(normal_quantile(0.5), 0.0);
  EXPECT_NEAR(normal_critical_value(0.95), 1.95996398454005423552, 1e-13);
  EXPECT_NEAR(normal_critical_value(0.90), 1.64485362695147271486, 1e-13);
}

TEST(Normal, QuantileInvertsCdf) {
  for (double p : {1e-12, 1e-6, 0.001, 0.02, 0.3, 0.7, 0.98, 0.999, 1 - 1e-9}) {
    EXPECT_NEAR(normal_cdf(normal_quantile(p)), p, 1e-13 * std::max(1.0, p / (1 - p)));
  }
  EXPECT_THROW(normal_quantile(0.0), std::domain_error);
  EXPECT_THROW(normal_quantile(1.0), std::domain_error);
}

TEST(Normal, CdfTail) {
  EXPECT_NEAR(normal_cdf(10.0 / std::sqrt(2.0)), 0.999999999999231, 1e-15);
}

TEST(Normal, BivariateUpperMatchesHighPrecisionQuadrature) {
  struct Case {
    double h, k, r, expected;
  };
  // Reference values from 30-digit numerical integration.
  const Case cases[] = {
      {0.3, -0.2, 0.5, 0.29754672426566915977},
      {1.0, 0.5, 0.95, 0.15633235444137192292},
      {-0.5, 0.7, -0.95, 0.016928565539343805633},
      {0.2, 0.1, 0.1, 0.20917584010285084263},
      {-1, -2, 0.999, 0.84134474606854294859},
      {2, 1, -0.6, 0.000034970980174365433838},
      {-3, -3, 0.99, 0.99840172393536043335},
      {0.5, 0.5, 0.9999, 0.30655121041043134431},
  };
  for (const auto& c : cases) {
    EXPECT_NEAR(bivariate_normal_upper(c.h, c.k, c.r), c.expected, 1e-14)
        << c.h << " " << c.k << " " << c.r;
  }
  EXPECT_DOUBLE_EQ(bivariate_normal_upper(0.4, -0.3, 0.0),
                   normal_cdf(-0.4) * normal_cdf(0.3));
  EXPECT_EQ(bivariate_normal_upper(INFINITY, 0.0, 0.5), 0.0);
}

}  // namespace
}  // namespace adaptci
