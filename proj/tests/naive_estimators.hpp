#pragma once

// Brute-force transcriptions of every estimator, written directly from the
// defining sums with no shared code paths. Only meant for tiny histories.

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "adaptci/confseq.hpp"
#include "adaptci/evaluate.hpp"
#include "adaptci/normal.hpp"

namespace adaptci::testing {

struct Naive {
  double point;
  double variance;
  double lo;
  double hi;
};

inline double naive_lambda_two_point(int t, int horizon, double e, double alpha) {
  if (t == horizon) return 1.0;
  const double decay = std::pow(t, -alpha) /
                       (std::pow(t, -alpha) +
                        (std::pow(horizon, 1 - alpha) - std::pow(t, 1 - alpha)) / (1 - alpha));
  return e / (horizon - t + 1) + (1 - e) * decay;
}

inline std::vector<double> naive_weights(const BanditHistory& h, int arm, EstimatorKind kind) {
  const int horizon = h.horizon();
  std::vector<double> w(static_cast<std::size_t>(horizon), 1.0);
  if (kind == EstimatorKind::kAwConstant) {
    for (int t = 1; t <= horizon; ++t) w[t - 1] = std::sqrt(h.propensity(t, arm) / horizon);
  } else if (kind == EstimatorKind::kAwTwoPoint || kind == EstimatorKind::kWeightedAverage) {
    double used = 0.0;
    for (int t = 1; t <= horizon; ++t) {
      const double e = h.propensity(t, arm);
      const double lambda = naive_lambda_two_point(t, horizon, e, 0.7);
      w[t - 1] = std::sqrt(e * (1.0 - used) * lambda);
      used += w[t - 1] * w[t - 1] / e;
    }
  }
  return w;
}

inline std::optional<Naive> naive_arm(const BanditHistory& h, int arm, EstimatorKind kind,
                               double level, const ConfSeqParams& cs) {
  const int horizon = h.horizon();
  const double z = normal_quantile(0.5 + 0.5 * level);
  std::vector<double> ys;
  for (int t = 1; t <= horizon; ++t) {
    if (h.arm(t) == arm) ys.push_back(h.reward(t));
  }
  const double n = static_cast<double>(ys.size());
  double ybar = 0.0;
  for (double y : ys) ybar += y;
  if (!ys.empty()) ybar /= n;

  switch (kind) {
    case EstimatorKind::kSampleMean:
    case EstimatorKind::kHowardCs: {
      if (ys.empty()) {
        if (kind == EstimatorKind::kSampleMean) return std::nullopt;
        return Naive{0.5 * (cs.support.lo + cs.support.hi), 0.0, cs.support.lo, cs.support.hi};
      }
      double ss = 0.0;
      for (double y : ys) ss += (y - ybar) * (y - ybar);
      const double var = ss / (n * n);
      if (kind == EstimatorKind::kSampleMean) {
        return Naive{ybar, var, ybar - z * std::sqrt(var), ybar + z * std::sqrt(var)};
      }
      double v = 0.0;
      double prev_mean = cs.initial_predictor;
      for (std::size_t i = 0; i < ys.size(); ++i) {
        v += (ys[i] - prev_mean) * (ys[i] - prev_mean);
        double s = 0.0;
        for (std::size_t j = 0; j <= i; ++j) s += ys[j];
        prev_mean = s / static_cast<double>(i + 1);
      }
      const double u = gamma_exponential_bound(v, 0.5 * (1 - level), cs);
      return Naive{ybar, var, ybar - u / n, ybar + u / n};
    }
    case EstimatorKind::kWDecorrelation: {
      if (ys.empty()) return std::nullopt;
      const double lambda = std::max(n, 1.0) / std::max(std::log(horizon), 1.0);
      double point = ybar;
      double var = 0.0;
      for (std::size_t i = 0; i < ys.size(); ++i) {
        const double a = std::pow(lambda / (1 + lambda), static_cast<double>(i)) / (1 + lambda);
        point += a * (ys[i] - ybar);
        var += a * a * (ys[i] - ybar) * (ys[i] - ybar);
      }
      return Naive{point, var, point - z * std::sqrt(var), point + z * std::sqrt(var)};
    }
    case EstimatorKind::kWeightedAverage: {
      const auto w = naive_weights(h, arm, kind);
      double num = 0.0;
      double den = 0.0;
      for (int t = 1; t <= horizon; ++t) {
        if (h.arm(t) != arm) continue;
        num += w[t - 1] / h.propensity(t, arm) * h.reward(t);
        den += w[t - 1] / h.propensity(t, arm);
      }
      if (den <= 0) return std::nullopt;
      const double point = num / den;
      double var = 0.0;
      for (int t = 1; t <= horizon; ++t) {
        if (h.arm(t) != arm) continue;
        const double g = w[t - 1] / h.propensity(t, arm);
        var += g * g * (h.reward(t) - point) * (h.reward(t) - point);
      }
      var /= den * den;
      return Naive{point, var, point - z * std::sqrt(var), point + z * std::sqrt(var)};
    }
    default: {
      const auto w = naive_weights(h, arm, kind);
      std::vector<double> gamma(static_cast<std::size_t>(horizon));
      double sum = 0.0;
      double count = 0.0;
      for (int t = 1; t <= horizon; ++t) {
        const double m = kind == EstimatorKind::kIpw ? 0.0 : (count > 0 ? sum / count : 0.0);
        const double ind = h.arm(t) == arm ? 1.0 : 0.0;
        gamma[t - 1] = m + ind / h.propensity(t, arm) * (h.reward(t) - m);
        if (h.arm(t) == arm) {
          sum += h.reward(t);
          count += 1.0;
        }
      }
      double num = 0.0;
      double den = 0.0;
      for (int t = 0; t < horizon; ++t) {
        num += w[t] * gamma[t];
        den += w[t];
      }
      const double point = num / den;
      double var = 0.0;
      for (int t = 0; t < horizon; ++t) var += w[t] * w[t] * (gamma[t] - point) * (gamma[t] - point);
      var /= den * den;
      return Naive{point, var, point - z * std::sqrt(var), point + z * std::sqrt(var)};
    }
  }
}

}  // namespace adaptci::testing
