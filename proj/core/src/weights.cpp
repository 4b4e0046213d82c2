#include "adaptci/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace adaptci {

WeightScheme parse_weight_scheme(std::string_view name) {
  if (name == "uniform") return WeightScheme::kUniform;
  if (name == "constant" || name == "constant_alloc") return WeightScheme::kConstantAllocation;
  if (name == "two_point" || name == "two_point_alloc") return WeightScheme::kTwoPointAllocation;
  throw std::invalid_argument("unknown weight scheme '" + std::string(name) + "'");
}

std::string_view weight_scheme_name(WeightScheme scheme) {
  switch (scheme) {
    case WeightScheme::kUniform: return "uniform";
    case WeightScheme::kConstantAllocation: return "constant_alloc";
    case WeightScheme::kTwoPointAllocation: return "two_point_alloc";
  }
  return "unknown";
}

double allocation_constant(int t, int horizon) {
  if (t < 1 || t > horizon) {
    throw std::out_of_range("allocation_constant: t = " + std::to_string(t) +
                            " outside [1, " + std::to_string(horizon) + "]");
  }
  return 1.0 / static_cast<double>(horizon - t + 1);
}

double allocation_decay_branch(int t, int horizon, double alpha) {
  if (t < 1 || t > horizon) throw std::domain_error("allocation: t out of range");
  if (!(alpha >= 0.0 && alpha < 1.0)) throw std::domain_error("allocation: alpha must lie in [0, 1)");
  if (t == horizon) return 1.0;
  const double td = t;
  const double Td = horizon;
  const double head = std::pow(td, -alpha);
  const double tail = (std::pow(Td, 1.0 - alpha) - std::pow(td, 1.0 - alpha)) / (1.0 - alpha);
  return head / (head + tail);
}

double allocation_two_point(int t, int horizon, double e_t, double alpha) {
  if (t < 1 || t > horizon) throw std::domain_error("allocation: t out of range");
  if (!(e_t > 0.0 && e_t <= 1.0)) throw std::domain_error("allocation: e_t must lie in (0, 1]");
  if (!(alpha >= 0.0 && alpha < 1.0)) throw std::domain_error("allocation: alpha must lie in [0, 1)");
  if (t == horizon) return 1.0;
  return e_t / static_cast<double>(horizon - t + 1) +
         (1.0 - e_t) * allocation_decay_branch(t, horizon, alpha);
}

StickBreak stick_break_step(double budget, double lambda, double e_t) {
  if (!(budget >= 0.0 && budget <= 1.0 + 1e-12)) throw std::domain_error("stick_break_step: budget outside [0, 1]");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::domain_error("stick_break_step: lambda outside [0, 1]");
  if (!(e_t > 0.0 && e_t <= 1.0)) throw std::domain_error("stick_break_step: e_t outside (0, 1]");
  const double h = std::sqrt(budget * lambda * e_t);
  const double remaining = lambda == 1.0 ? 0.0 : std::max(budget * (1.0 - lambda), 0.0);
  return {h, remaining};
}

WeightSchedule build_schedule(const BanditHistory& history, int arm,
                              WeightScheme scheme, double alpha) {
  if (arm < 0 || arm >= history.num_arms()) {
    throw std::out_of_range("build_schedule: arm out of range");
  }
  const int horizon = history.horizon();
  const auto n = static_cast<std::size_t>(horizon);
  WeightSchedule s{arm, scheme, std::vector<double>(n), std::vector<double>(n),
                   std::vector<double>(n)};
  if (scheme == WeightScheme::kUniform) {
    std::fill(s.h.begin(), s.h.end(), 1.0);
    std::fill(s.lambda.begin(), s.lambda.end(), std::numeric_limits<double>::quiet_NaN());
    std::fill(s.budget.begin(), s.budget.end(), std::numeric_limits<double>::quiet_NaN());
    return s;
  }
  double budget = 1.0;
  for (int t = 1; t <= horizon; ++t) {
    const auto i = static_cast<std::size_t>(t - 1);
    const double e = history.propensity(t, arm);
    double lambda = 1.0;
    if (t < horizon) {
      lambda = scheme == WeightScheme::kConstantAllocation
                   ? allocation_constant(t, horizon)
                   : allocation_two_point(t, horizon, e, alpha);
    }
    s.budget[i] = budget;
    s.lambda[i] = lambda;
    if (e > 0.0) {
      const StickBreak step = stick_break_step(budget, lambda, e);
      s.h[i] = step.h;
      budget = step.budget;
    } else {
      // e_t(w) = 0: the arm cannot be scored at t; it gets no weight and
      // keeps its budget.
      s.h[i] = 0.0;
    }
  }
  return s;
}

bool check_allocation_bounds(double lambda, int t, int horizon, double e_t,
                             double alpha, double c_prime) {
  const double lower = 1.0 / static_cast<double>(horizon - t + 1);
  const double td = t;
  const double upper = c_prime * e_t /
                       (std::pow(td, -alpha) + std::pow(static_cast<double>(horizon), 1.0 - alpha) -
                        std::pow(td, 1.0 - alpha));
  // Relative slack of a few ulps: at alpha = 0 the two-point rate equals the
  // lower bound exactly in real arithmetic.
  constexpr double kSlack = 1e-12;
  return lower * (1.0 - kSlack) <= lambda && lambda <= upper * (1.0 + kSlack);
}

WeightDiagnostics weight_diagnostics(const BanditHistory& history,
                                     const WeightSchedule& schedule,
                                     double delta) {
  double sum_h = 0.0;
  double var_sum = 0.0;
  double moment = 0.0;
  for (int t = 1; t <= schedule.horizon(); ++t) {
    const double h = schedule.h[static_cast<std::size_t>(t - 1)];
    const double e = history.propensity(t, schedule.target_arm);
    if (!(e > 0.0)) continue;
    sum_h += h;
    var_sum += h * h / e;
    moment += std::pow(h, 2.0 + delta) / std::pow(e, 1.0 + delta);
  }
  WeightDiagnostics d;
  d.variance_sum = var_sum;
  d.effective_sample_size = var_sum > 0.0 ? sum_h * sum_h / var_sum : 0.0;
  d.lyapunov_ratio = var_sum > 0.0 ? moment / std::pow(var_sum, 1.0 + 0.5 * delta) : 0.0;
  return d;
}

}  // namespace adaptci
