#include "adaptci/confseq.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/tools/roots.hpp>

namespace adaptci {

ConfSeqState confseq_update(ConfSeqState state, double reward,
                            double initial_predictor) {
  const double prediction = state.count == 0 ? initial_predictor : state.running_mean;
  const double d = reward - prediction;
  state.variance_process += d * d;
  ++state.count;
  state.running_mean += (reward - state.running_mean) / static_cast<double>(state.count);
  return state;
}

double gamma_exponential_rho(double v_opt, double alpha) {
  if (!(v_opt > 0.0)) throw std::invalid_argument("confseq: v_opt must be positive");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("confseq: alpha must lie in (0, 1)");
  const double l = std::log(1.0 / alpha);
  return v_opt / (2.0 * l + std::log1p(2.0 * l));
}

namespace {

void check_params(double alpha, const ConfSeqParams& p) {
  if (!(p.c > 0.0)) throw std::invalid_argument("confseq: scale c must be positive");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("confseq: alpha must lie in (0, 1)");
}

double rho_for(double alpha, const ConfSeqParams& p) {
  return gamma_exponential_rho(p.v_opt, p.alpha_opt > 0.0 ? p.alpha_opt : alpha);
}

double log_mixture(double s, double v, double rho, double c) {
  using boost::math::gamma_p;
  using boost::math::lgamma;
  const double c2 = c * c;
  const double k = rho / c2;
  const double a = (v + rho) / c2;
  const double big_a = (c * s + v + rho) / c2;
  const double norm = k * std::log(k) - lgamma(k) - std::log(gamma_p(k, k));
  return norm + lgamma(a) + std::log(gamma_p(a, big_a)) - a * std::log(big_a) +
         (c * s + v) / c2;
}

double solve_bound(double v, double rho, double c, double log_threshold) {
  auto f = [&](double s) { return log_mixture(s, v, rho, c) - log_threshold; };
  double lo = 0.0;
  double hi = std::max(1.0, std::sqrt(2.0 * (v + rho) * log_threshold) + c * log_threshold);
  while (f(hi) < 0.0) {
    lo = hi;
    hi *= 2.0;
  }
  boost::math::tools::eps_tolerance<double> tol(48);
  std::uintmax_t max_iter = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, tol, max_iter);
  return 0.5 * (a + b);
}

}  // namespace

double gamma_exponential_log_mixture(double s, double v, double alpha,
                                     const ConfSeqParams& params) {
  check_params(alpha, params);
  if (!(s >= 0.0) || !(v >= 0.0)) throw std::domain_error("confseq: s and v must be >= 0");
  return log_mixture(s, v, rho_for(alpha, params), params.c);
}

double gamma_exponential_bound(double v, double alpha, const ConfSeqParams& params) {
  check_params(alpha, params);
  if (!(v >= 0.0)) throw std::domain_error("confseq: intrinsic time must be >= 0");
  return solve_bound(v, rho_for(alpha, params), params.c, std::log(1.0 / alpha));
}

Interval confseq_interval(const ConfSeqState& state, double level,
                          const ConfSeqParams& params) {
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("confseq: level must lie in (0, 1)");
  if (state.count == 0) return params.support;
  const double alpha = 0.5 * (1.0 - level);
  const double half = gamma_exponential_bound(state.variance_process, alpha, params) /
                      static_cast<double>(state.count);
  return {state.running_mean - half, state.running_mean + half};
}

Interval contrast_union_interval(const Interval& arm1, const Interval& arm2) {
  return {arm2.lo - arm1.hi, arm2.hi - arm1.lo};
}

double floor_arm_intrinsic_time(int horizon, int num_arms, double exponent) {
  double sum = 0.0;
  for (int t = horizon; t >= 1; --t) sum += std::pow(static_cast<double>(t), -exponent);
  return std::floor(sum / num_arms);
}

ConfSeqParams confseq_params_for(const ArmOutcomeModel& model, int arm,
                                 int horizon, double floor_exponent) {
  const auto support = model.support(arm);
  if (!support) {
    throw std::invalid_argument("confidence sequences need bounded rewards");
  }
  ConfSeqParams p;
  p.c = support->width();
  p.support = *support;
  p.initial_predictor = 0.5 * (support->lo + support->hi);
  const double t_opt = floor_arm_intrinsic_time(horizon, model.num_arms(), floor_exponent);
  p.v_opt = model.noise_variance() * std::max(t_opt, 1.0);
  return p;
}

BoundaryCrossingChecker::BoundaryCrossingChecker(double alpha,
                                                 const ConfSeqParams& params,
                                                 double v_max)
    : alpha_(alpha), params_(params), log_threshold_(std::log(1.0 / alpha)) {
  check_params(alpha, params);
  constexpr int kGrid = 512;
  v_step_ = std::max(v_max, 1e-9) / kGrid;
  grid_u_.resize(kGrid + 1);
  const double rho = rho_for(alpha, params);
  for (int i = 0; i <= kGrid; ++i) {
    grid_u_[static_cast<std::size_t>(i)] = solve_bound(i * v_step_, rho, params.c, log_threshold_);
  }
}

bool BoundaryCrossingChecker::crosses(double s, double v) const {
  if (s <= 0.0) return false;
  const double pos = v / v_step_;
  const auto i = static_cast<std::size_t>(pos);
  if (i + 1 < grid_u_.size()) {
    // u is increasing in v: u(v_i) <= u(v) <= u(v_{i+1}).
    if (s <= grid_u_[i]) return false;
    if (s > grid_u_[i + 1]) return true;
  }
  return gamma_exponential_log_mixture(s, v, alpha_, params_) >= log_threshold_;
}

}  // namespace adaptci
