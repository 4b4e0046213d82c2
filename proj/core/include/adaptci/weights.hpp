#pragma once

#include <string_view>
#include <vector>

#include "adaptci/history.hpp"

namespace adaptci {

enum class WeightScheme { kUniform, kConstantAllocation, kTwoPointAllocation };

WeightScheme parse_weight_scheme(std::string_view name);
std::string_view weight_scheme_name(WeightScheme scheme);

/// Evaluation weights h_t(w) for one arm, with the allocation rates and the
/// remaining variance budget that produced them.
///
/// For stick-breaking schemes budget[t-1] = 1 - sum_{s<t} h_s^2 / e_s, and
/// h_t^2 / e_t = budget[t-1] * lambda[t-1], with lambda_T = 1 so the budget
/// is exhausted at T. The uniform scheme has h_t = 1 and leaves lambda and
/// budget filled with NaN.
struct WeightSchedule {
  int target_arm = 0;
  WeightScheme scheme = WeightScheme::kUniform;
  std::vector<double> h;
  std::vector<double> lambda;
  std::vector<double> budget;

  int horizon() const { return static_cast<int>(h.size()); }
};

/// 1 / (T - t + 1). Throws std::out_of_range unless 1 <= t <= T.
double allocation_constant(int t, int horizon);

/// e_t / (T - t + 1) + (1 - e_t) t^-a / (t^-a + (T^(1-a) - t^(1-a)) / (1-a)).
/// Throws std::domain_error outside 1 <= t <= T, 0 < e_t <= 1, 0 <= a < 1.
double allocation_two_point(int t, int horizon, double e_t, double alpha);

/// The "decaying propensity" branch of the two-point rate (e_t = 0).
double allocation_decay_branch(int t, int horizon, double alpha);

struct StickBreak {
  double h = 0.0;
  double budget = 0.0;
};

/// h_t = sqrt(budget * lambda * e_t); remaining budget * (1 - lambda).
/// Throws std::domain_error on negative or out-of-range inputs.
StickBreak stick_break_step(double budget, double lambda, double e_t);

/// Runs the recursion over the whole history. `alpha` is only used by the
/// two-point scheme. lambda_T is forced to 1.
WeightSchedule build_schedule(const BanditHistory& history, int arm,
                              WeightScheme scheme, double alpha = 0.7);

/// Both sides of the allocation-rate condition
///   1/(T-t+1) <= lambda_t <= C' e_t / (t^-a + T^(1-a) - t^(1-a)),
/// each side with 1e-12 relative slack for rounding.
bool check_allocation_bounds(double lambda, int t, int horizon, double e_t,
                             double alpha, double c_prime);

/// Single-run proxies for the infinite-sampling and bounded-moment ratios,
/// with realized sum h_t^2/e_t standing in for its expectation.
struct WeightDiagnostics {
  /// (sum h_t)^2 / sum h_t^2/e_t
  double effective_sample_size = 0.0;
  /// sum h_t^(2+d)/e_t^(1+d) / (sum h_t^2/e_t)^(1+d/2), d = `delta`
  double lyapunov_ratio = 0.0;
  /// sum h_t^2 / e_t
  double variance_sum = 0.0;
};

WeightDiagnostics weight_diagnostics(const BanditHistory& history,
                                     const WeightSchedule& schedule,
                                     double delta = 1.0);

}  // namespace adaptci
