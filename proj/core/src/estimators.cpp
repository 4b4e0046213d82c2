#include "adaptci/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "adaptci/normal.hpp"

namespace adaptci {

namespace {

void check_lengths(std::span<const double> scores, std::span<const double> weights) {
  if (scores.size() != weights.size()) {
    throw std::invalid_argument("scores and weights differ in length");
  }
}

EstimateReport make_report(std::string name, Target target, int horizon,
                           double point, double variance, double level) {
  EstimateReport r;
  r.estimator_name = std::move(name);
  r.target = target;
  r.horizon = horizon;
  r.point = point;
  r.variance = std::max(variance, 0.0);
  r.std_error = std::sqrt(r.variance);
  r.level = level;
  const Interval ci = normal_ci(point, r.variance, level);
  r.ci_lo = ci.lo;
  r.ci_hi = ci.hi;
  return r;
}

}  // namespace

double adaptively_weighted_estimate(std::span<const double> scores,
                                    std::span<const double> weights) {
  check_lengths(scores, weights);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    num += weights[i] * scores[i];
    den += weights[i];
  }
  if (!(den > 0.0)) throw std::domain_error("evaluation weights sum to zero");
  return num / den;
}

double adaptively_weighted_estimate(const ScoreSeries& scores,
                                    const WeightSchedule& schedule) {
  return adaptively_weighted_estimate(scores.values, schedule.h);
}

double variance_estimate(std::span<const double> scores,
                         std::span<const double> weights, double point) {
  check_lengths(scores, weights);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const double d = scores[i] - point;
    num += weights[i] * weights[i] * d * d;
    den += weights[i];
  }
  if (!(den > 0.0)) throw std::domain_error("evaluation weights sum to zero");
  return num / (den * den);
}

double variance_estimate(const ScoreSeries& scores,
                         const WeightSchedule& schedule, double point) {
  return variance_estimate(scores.values, schedule.h, point);
}

Interval normal_ci(double point, double variance, double level) {
  if (!(variance >= 0.0)) throw std::domain_error("normal_ci: negative variance");
  const double half = normal_critical_value(level) * std::sqrt(variance);
  return {point - half, point + half};
}

EstimateReport weighted_arm_estimate(std::string name, const ScoreSeries& scores,
                                     const WeightSchedule& schedule,
                                     double level) {
  const double point = adaptively_weighted_estimate(scores, schedule);
  const double var = variance_estimate(scores, schedule, point);
  return make_report(std::move(name), ArmTarget{schedule.target_arm},
                     static_cast<int>(scores.values.size()), point, var, level);
}

EstimateReport contrast_estimate(const EstimateReport& first,
                                 const EstimateReport& second) {
  const auto* a = std::get_if<ArmTarget>(&first.target);
  const auto* b = std::get_if<ArmTarget>(&second.target);
  if (a == nullptr || b == nullptr) {
    throw std::invalid_argument("contrast_estimate: both reports must target arms");
  }
  if (first.estimator_name != second.estimator_name) {
    throw std::invalid_argument("contrast_estimate: estimators differ");
  }
  if (first.horizon != second.horizon) {
    throw std::invalid_argument("contrast_estimate: reports come from different histories");
  }
  if (first.level != second.level) {
    throw std::invalid_argument("contrast_estimate: levels differ");
  }
  return make_report(first.estimator_name, ContrastTarget{a->arm, b->arm},
                     first.horizon, first.point - second.point,
                     first.variance + second.variance, first.level);
}

std::optional<EstimateReport> sample_mean_estimate(const BanditHistory& history,
                                                   int arm, double level) {
  long count = 0;
  double sum = 0.0;
  for (int t = 1; t <= history.horizon(); ++t) {
    if (history.arm(t) == arm) {
      ++count;
      sum += history.reward(t);
    }
  }
  if (count == 0) return std::nullopt;
  const double n = static_cast<double>(count);
  const double mean = sum / n;
  double ss = 0.0;
  for (int t = 1; t <= history.horizon(); ++t) {
    if (history.arm(t) == arm) {
      const double d = history.reward(t) - mean;
      ss += d * d;
    }
  }
  return make_report("sample_mean", ArmTarget{arm}, history.horizon(), mean,
                     ss / (n * n), level);
}

std::optional<EstimateReport> weighted_average_estimate(
    const BanditHistory& history, int arm, const WeightSchedule& schedule,
    double level) {
  if (schedule.horizon() != history.horizon()) {
    throw std::invalid_argument("weighted_average_estimate: schedule length mismatch");
  }
  double num = 0.0;
  double den = 0.0;
  for (int t = 1; t <= history.horizon(); ++t) {
    if (history.arm(t) != arm) continue;
    const double g = schedule.h[static_cast<std::size_t>(t - 1)] / history.propensity(t, arm);
    num += g * history.reward(t);
    den += g;
  }
  if (!(den > 0.0)) return std::nullopt;
  const double point = num / den;
  double ss = 0.0;
  for (int t = 1; t <= history.horizon(); ++t) {
    if (history.arm(t) != arm) continue;
    const double g = schedule.h[static_cast<std::size_t>(t - 1)] / history.propensity(t, arm);
    const double d = history.reward(t) - point;
    ss += g * g * d * d;
  }
  return make_report("weighted_average", ArmTarget{arm}, history.horizon(), point,
                     ss / (den * den), level);
}

double w_decorrelation_weight(long pulls_before, double tuning_lambda) {
  if (!(tuning_lambda > 0.0)) {
    throw std::domain_error("w-decorrelation: tuning lambda must be positive");
  }
  const double r = tuning_lambda / (1.0 + tuning_lambda);
  return std::pow(r, static_cast<double>(pulls_before)) / (1.0 + tuning_lambda);
}

double default_w_decorrelation_lambda(long arm_pulls, int horizon) {
  const double log_t = std::max(1.0, std::log(static_cast<double>(horizon)));
  return std::max(static_cast<double>(arm_pulls), 1.0) / log_t;
}

std::optional<EstimateReport> w_decorrelation_estimate(
    const BanditHistory& history, int arm, double tuning_lambda, double level) {
  if (!(tuning_lambda > 0.0)) {
    throw std::domain_error("w-decorrelation: tuning lambda must be positive");
  }
  const auto mean_report = sample_mean_estimate(history, arm, level);
  if (!mean_report) return std::nullopt;
  const double ybar = mean_report->point;
  const double log_ratio = std::log(tuning_lambda / (1.0 + tuning_lambda));
  const double scale = 1.0 / (1.0 + tuning_lambda);
  double correction = 0.0;
  double var = 0.0;
  long pulls = 0;
  for (int t = 1; t <= history.horizon(); ++t) {
    if (history.arm(t) != arm) continue;
    const double a = scale * std::exp(log_ratio * static_cast<double>(pulls));
    const double d = history.reward(t) - ybar;
    correction += a * d;
    var += a * a * d * d;
    ++pulls;
  }
  return make_report("w_decorrelation", ArmTarget{arm}, history.horizon(),
                     ybar + correction, var, level);
}

double studentize(const EstimateReport& report, double truth) {
  if (!(report.variance > 0.0)) {
    throw std::domain_error("studentize: variance must be positive");
  }
  return (report.point - truth) / std::sqrt(report.variance);
}

void attach_truth(EstimateReport& report, double truth) {
  report.truth = truth;
  if (report.variance > 0.0) report.studentized = studentize(report, truth);
  else report.studentized.reset();
}

}  // namespace adaptci
