#pragma once

#include <optional>
#include <span>
#include <string>

#include "adaptci/environment.hpp"
#include "adaptci/history.hpp"
#include "adaptci/scores.hpp"
#include "adaptci/weights.hpp"

namespace adaptci {

/// Point estimate with its variance estimate and a two-sided interval.
struct EstimateReport {
  std::string estimator_name;
  Target target;
  int horizon = 0;
  double point = 0.0;
  double variance = 0.0;
  double std_error = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  double level = 0.95;
  std::optional<double> studentized;
  std::optional<double> truth;

  double ci_width() const { return ci_hi - ci_lo; }
  bool covers(double value) const { return ci_lo <= value && value <= ci_hi; }
};

/// sum h_t G_t / sum h_t. Throws std::invalid_argument on a length mismatch
/// and std::domain_error if the weights sum to zero.
double adaptively_weighted_estimate(std::span<const double> scores,
                                    std::span<const double> weights);
double adaptively_weighted_estimate(const ScoreSeries& scores,
                                    const WeightSchedule& schedule);

/// sum h_t^2 (G_t - point)^2 / (sum h_t)^2.
double variance_estimate(std::span<const double> scores,
                         std::span<const double> weights, double point);
double variance_estimate(const ScoreSeries& scores,
                         const WeightSchedule& schedule, double point);

/// point -/+ z sqrt(variance) with P(|Z| <= z) = level.
Interval normal_ci(double point, double variance, double level);

/// Adaptively-weighted AIPW (or IPW) estimate of one arm value.
EstimateReport weighted_arm_estimate(std::string name,
                                     const ScoreSeries& scores,
                                     const WeightSchedule& schedule,
                                     double level);

/// Difference of two arm reports with summed variances. Throws
/// std::invalid_argument unless both are arm reports of the same estimator
/// on histories of the same length.
EstimateReport contrast_estimate(const EstimateReport& first,
                                 const EstimateReport& second);

/// Sample mean with variance T_w^-2 sum (Y_t - mean)^2. Empty if T_w == 0.
std::optional<EstimateReport> sample_mean_estimate(const BanditHistory& history,
                                                   int arm, double level = 0.95);

/// sum h_t (1{W_t=w}/e_t) Y_t / sum h_t (1{W_t=w}/e_t). Empty when the
/// denominator is zero.
std::optional<EstimateReport> weighted_average_estimate(
    const BanditHistory& history, int arm, const WeightSchedule& schedule,
    double level = 0.95);

/// Decorrelation weight of the n-th pull (0-based) of an arm.
double w_decorrelation_weight(long pulls_before, double tuning_lambda);

/// Harness default for the decorrelation tuning parameter: T_w / log(T).
double default_w_decorrelation_lambda(long arm_pulls, int horizon);

/// Sample mean corrected by geometrically decaying weights in the arm's pull
/// count. Empty if the arm was never pulled.
std::optional<EstimateReport> w_decorrelation_estimate(
    const BanditHistory& history, int arm, double tuning_lambda,
    double level = 0.95);

/// (point - truth) / sqrt(variance). Throws std::domain_error if variance
/// is not positive.
double studentize(const EstimateReport& report, double truth);

/// Sets report.truth and, when the variance is positive, report.studentized.
void attach_truth(EstimateReport& report, double truth);

}  // namespace adaptci
