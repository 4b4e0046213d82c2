#pragma once

#include <vector>

#include "adaptci/environment.hpp"

namespace adaptci {

/// Parameters of the empirical-Bernstein confidence sequence.
///
/// The boundary is the gamma-exponential mixture of Howard, Ramdas,
/// McAuliffe and Sekhon (2021). With k = rho/c^2,
/// a = (v + rho)/c^2 and A = (c s + v + rho)/c^2 the mixture martingale is
///
///   m(s, v) = k^k / (Gamma(k) P(k, k)) * Gamma(a) P(a, A) / A^a
///             * exp((c s + v)/c^2),
///
/// where P is the regularized lower incomplete gamma function, and the
/// one-sided boundary at crossing probability alpha is
/// u(v) = sup{s >= 0 : m(s, v) < 1/alpha}. The mixing parameter is tuned
/// for intrinsic time v_opt with
///   rho = v_opt / (2 log(1/alpha_opt) + log(1 + 2 log(1/alpha_opt))).
struct ConfSeqParams {
  /// Sub-exponential scale; the width of the reward support.
  double c = 2.0;
  /// Intrinsic time at which the boundary is tightest.
  double v_opt = 1.0;
  /// Crossing probability used to tune rho; <= 0 means "use the alpha the
  /// boundary is evaluated at".
  double alpha_opt = 0.0;
  /// Known support, returned as the interval before any observation.
  Interval support{0.0, 0.0};
  /// Predictor of the first observation in the variance process.
  double initial_predictor = 0.0;
};

/// Running state for one arm.
struct ConfSeqState {
  long count = 0;
  double running_mean = 0.0;
  double variance_process = 0.0;
};

/// Adds (reward - prediction)^2 to the variance process, where the
/// prediction is the running mean (or `initial_predictor` when count == 0),
/// then updates the mean.
ConfSeqState confseq_update(ConfSeqState state, double reward,
                            double initial_predictor = 0.0);

double gamma_exponential_rho(double v_opt, double alpha);

/// log m(s, v) for s >= 0.
double gamma_exponential_log_mixture(double s, double v, double alpha,
                                     const ConfSeqParams& params);

/// u(v) at one-sided crossing probability `alpha`.
double gamma_exponential_bound(double v, double alpha,
                               const ConfSeqParams& params);

/// running_mean -/+ u(V)/count with each side at crossing (1 - level)/2;
/// the known support when count == 0.
Interval confseq_interval(const ConfSeqState& state, double level,
                          const ConfSeqParams& params);

/// Union-bound interval for Q(arm2) - Q(arm1) from per-arm intervals:
/// [lo2 - hi1, hi2 - lo1].
Interval contrast_union_interval(const Interval& arm1, const Interval& arm2);

/// floor((1/K) sum_{t<=T} t^-exponent), the expected pull count of an arm
/// held at the propensity floor.
double floor_arm_intrinsic_time(int horizon, int num_arms,
                                double exponent = 0.7);

/// Parameters for an arm of `model`: c = support width, v_opt = Var(Y) *
/// t_opt, support and initial predictor taken from the arm's support.
ConfSeqParams confseq_params_for(const ArmOutcomeModel& model, int arm,
                                 int horizon, double floor_exponent = 0.7);

/// Checks |S| > u(v) without solving for u, using a cached grid of u values
/// to skip the mixture evaluation away from the boundary.
class BoundaryCrossingChecker {
 public:
  BoundaryCrossingChecker(double alpha, const ConfSeqParams& params,
                          double v_max);

  /// True iff s > u(v).
  bool crosses(double s, double v) const;

 private:
  double alpha_;
  ConfSeqParams params_;
  double log_threshold_;
  double v_step_;
  std::vector<double> grid_u_;
};

}  // namespace adaptci
