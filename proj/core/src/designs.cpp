#include "adaptci/designs.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>

#include "adaptci/history.hpp"
#include "adaptci/normal.hpp"

namespace adaptci {

namespace {

// Probabilists' Gauss-Hermite rule: sum_i w_i f(z_i) ~ E[f(Z)], Z ~ N(0, 1).
struct HermiteRule {
  static constexpr int kNodes = 24;
  std::array<double, kNodes> z{};
  std::array<double, kNodes> w{};

  HermiteRule() {
    // Newton iteration on the orthonormal physicists' Hermite recurrence.
    const int n = kNodes;
    const double pim4 = 1.0 / std::pow(std::numbers::pi, 0.25);
    std::array<double, kNodes> x{};
    std::array<double, kNodes> wx{};
    double root = 0.0;
    for (int i = 0; i < (n + 1) / 2; ++i) {
      if (i == 0) {
        root = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
      } else if (i == 1) {
        root -= 1.14 * std::pow(static_cast<double>(n), 0.426) / root;
      } else if (i == 2) {
        root = 1.86 * root - 0.86 * x[0];
      } else if (i == 3) {
        root = 1.91 * root - 0.91 * x[1];
      } else {
        root = 2.0 * root - x[static_cast<std::size_t>(i - 2)];
      }
      double pp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p1 = pim4;
        double p2 = 0.0;
        for (int j = 0; j < n; ++j) {
          const double p3 = p2;
          p2 = p1;
          p1 = root * std::sqrt(2.0 / (j + 1)) * p2 -
               std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
        }
        pp = std::sqrt(2.0 * n) * p2;
        const double prev = root;
        root = prev - p1 / pp;
        if (std::abs(root - prev) <= 1e-15) break;
      }
      x[static_cast<std::size_t>(i)] = root;
      x[static_cast<std::size_t>(n - 1 - i)] = -root;
      wx[static_cast<std::size_t>(i)] = 2.0 / (pp * pp);
      wx[static_cast<std::size_t>(n - 1 - i)] = wx[static_cast<std::size_t>(i)];
    }
    for (int i = 0; i < n; ++i) {
      z[static_cast<std::size_t>(i)] = std::numbers::sqrt2 * x[static_cast<std::size_t>(i)];
      w[static_cast<std::size_t>(i)] = wx[static_cast<std::size_t>(i)] / std::sqrt(std::numbers::pi);
    }
  }
};

const HermiteRule& hermite_rule() {
  static const HermiteRule rule;
  return rule;
}

using Legendre = boost::math::quadrature::gauss<double, 10>;

double phi_cdf(double x) { return 0.5 * std::erfc(-x * (1.0 / std::numbers::sqrt2)); }

double phi_pdf(double z) {
  return std::exp(-0.5 * z * z) * (0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2);
}

constexpr double kZMax = 8.5;
// A factor counts as steep when its transition is narrower than this many
// standard deviations of the integration variable.
constexpr double kSteepRatio = 0.5;
constexpr double kStepHalfWidth = 8.0;

// P(arm w is the argmax) = E_Z[ prod_j Phi((m_w - m_j + s_w Z) / s_j) ].
double argmax_probability(int w, std::span<const double> m,
                          std::span<const double> s) {
  const int k = static_cast<int>(m.size());
  const double sw = s[static_cast<std::size_t>(w)];
  const double mw = m[static_cast<std::size_t>(w)];

  double z_lo = -kZMax;
  bool steep = false;
  for (int j = 0; j < k; ++j) {
    if (j == w) continue;
    const double r = s[static_cast<std::size_t>(j)] / sw;
    const double c = (m[static_cast<std::size_t>(j)] - mw) / sw;
    z_lo = std::max(z_lo, c - kStepHalfWidth * r);
    if (r < kSteepRatio && c + kStepHalfWidth * r > -kZMax &&
        c - kStepHalfWidth * r < kZMax) {
      steep = true;
    }
  }
  if (z_lo >= kZMax) return 0.0;

  auto integrand = [&](double z) {
    double prod = 1.0;
    for (int j = 0; j < k; ++j) {
      if (j == w) continue;
      prod *= phi_cdf((mw - m[static_cast<std::size_t>(j)] + sw * z) /
                      s[static_cast<std::size_t>(j)]);
    }
    return prod;
  };

  if (!steep && z_lo <= -kZMax + 1e-12) {
    const auto& rule = hermite_rule();
    double acc = 0.0;
    for (int i = 0; i < HermiteRule::kNodes; ++i) {
      acc += rule.w[static_cast<std::size_t>(i)] * integrand(rule.z[static_cast<std::size_t>(i)]);
    }
    return acc;
  }

  // Composite Gauss-Legendre on [z_lo, kZMax] with extra panels around each
  // steep transition.
  std::array<double, 16> cuts{};
  std::size_t ncuts = 0;
  cuts[ncuts++] = z_lo;
  cuts[ncuts++] = kZMax;
  for (int j = 0; j < k && ncuts + 3 <= cuts.size(); ++j) {
    if (j == w) continue;
    const double r = s[static_cast<std::size_t>(j)] / sw;
    if (r >= kSteepRatio) continue;
    const double c = (m[static_cast<std::size_t>(j)] - mw) / sw;
    for (double cut : {c - kStepHalfWidth * r, c, c + kStepHalfWidth * r}) {
      if (cut > z_lo && cut < kZMax) cuts[ncuts++] = cut;
    }
  }
  std::sort(cuts.begin(), cuts.begin() + static_cast<std::ptrdiff_t>(ncuts));

  auto panel = [&](double a, double b) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    const auto& xs = Legendre::abscissa();
    const auto& ws = Legendre::weights();
    double acc = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double off = half * xs[i];
      acc += ws[i] * (phi_pdf(mid + off) * integrand(mid + off) +
                      (xs[i] == 0.0 ? 0.0 : phi_pdf(mid - off) * integrand(mid - off)));
    }
    return acc * half;
  };

  constexpr double kMaxPanel = 1.5;
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < ncuts; ++i) {
    const double a = cuts[i];
    const double b = cuts[i + 1];
    if (b <= a) continue;
    const int pieces = std::max(1, static_cast<int>(std::ceil((b - a) / kMaxPanel)));
    const double step = (b - a) / pieces;
    for (int p = 0; p < pieces; ++p) total += panel(a + p * step, a + (p + 1) * step);
  }
  return total;
}

}  // namespace

PosteriorState::PosteriorState(int num_arms, double prior_mean,
                               double prior_var, double likelihood_var)
    : arms_(static_cast<std::size_t>(num_arms),
            ArmPosterior{prior_mean, prior_var, 0, 0.0}),
      prior_mean_(prior_mean),
      prior_var_(prior_var),
      likelihood_var_(likelihood_var) {
  if (num_arms < 1) throw std::invalid_argument("PosteriorState: need >= 1 arm");
  if (!(prior_var > 0.0) || !(likelihood_var > 0.0)) {
    throw std::invalid_argument("PosteriorState: variances must be positive");
  }
}

void PosteriorState::update(int arm, double reward) {
  if (arm < 0 || arm >= num_arms()) {
    throw std::out_of_range("posterior update: arm out of range");
  }
  auto& a = arms_[static_cast<std::size_t>(arm)];
  ++a.pull_count;
  a.reward_sum += reward;
  const double precision =
      1.0 / prior_var_ + static_cast<double>(a.pull_count) / likelihood_var_;
  a.var = 1.0 / precision;
  a.mean = (prior_mean_ / prior_var_ + a.reward_sum / likelihood_var_) * a.var;
}

PosteriorState posterior_update(PosteriorState state, int arm, double reward) {
  state.update(arm, reward);
  return state;
}

std::vector<double> thompson_raw_probs(const PosteriorState& state,
                                       int num_draws, Rng& rng) {
  if (num_draws < 1) throw std::invalid_argument("num_draws must be >= 1");
  const int k = state.num_arms();
  std::vector<long> wins(static_cast<std::size_t>(k), 0);
  std::vector<double> sd(static_cast<std::size_t>(k));
  for (int w = 0; w < k; ++w) sd[static_cast<std::size_t>(w)] = std::sqrt(state.arm(w).var);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int l = 0; l < num_draws; ++l) {
    int best = 0;
    double best_value = -std::numeric_limits<double>::infinity();
    for (int w = 0; w < k; ++w) {
      const double y = state.arm(w).mean + sd[static_cast<std::size_t>(w)] * normal(rng);
      if (y > best_value) {
        best_value = y;
        best = w;
      }
    }
    ++wins[static_cast<std::size_t>(best)];
  }
  std::vector<double> out(static_cast<std::size_t>(k));
  for (int w = 0; w < k; ++w) {
    out[static_cast<std::size_t>(w)] =
        static_cast<double>(wins[static_cast<std::size_t>(w)]) / num_draws;
  }
  return out;
}

void thompson_exact_probs(const PosteriorState& state, std::span<double> out) {
  const int k = state.num_arms();
  if (static_cast<int>(out.size()) != k) {
    throw std::invalid_argument("thompson_exact_probs: output size mismatch");
  }
  if (k == 2) {
    const auto& a = state.arm(0);
    const auto& b = state.arm(1);
    const double z = (a.mean - b.mean) / std::sqrt(a.var + b.var);
    out[0] = phi_cdf(z);
    out[1] = phi_cdf(-z);
    return;
  }
  if (k == 3) {
    // P(X_w > X_j, X_w > X_l) is an orthant probability of the two
    // differences, which are correlated through X_w.
    double total = 0.0;
    for (int w = 0; w < 3; ++w) {
      const int j = (w + 1) % 3;
      const int l = (w + 2) % 3;
      const auto& aw = state.arm(w);
      const auto& aj = state.arm(j);
      const auto& al = state.arm(l);
      const double sj = std::sqrt(aw.var + aj.var);
      const double sl = std::sqrt(aw.var + al.var);
      const double r = aw.var / (sj * sl);
      const double p = bivariate_normal_upper((aj.mean - aw.mean) / sj,
                                              (al.mean - aw.mean) / sl, r);
      out[static_cast<std::size_t>(w)] = p;
      total += p;
    }
    for (double& p : out) p /= total;
    return;
  }
  thompson_quadrature_probs(state, out);
}

void thompson_quadrature_probs(const PosteriorState& state, std::span<double> out) {
  const int k = state.num_arms();
  if (static_cast<int>(out.size()) != k) {
    throw std::invalid_argument("thompson_quadrature_probs: output size mismatch");
  }
  if (k == 1) {
    out[0] = 1.0;
    return;
  }
  std::array<double, 32> mbuf{};
  std::array<double, 32> sbuf{};
  std::vector<double> mvec;
  std::vector<double> svec;
  std::span<double> m;
  std::span<double> s;
  if (k <= 32) {
    m = std::span<double>(mbuf.data(), static_cast<std::size_t>(k));
    s = std::span<double>(sbuf.data(), static_cast<std::size_t>(k));
  } else {
    mvec.resize(static_cast<std::size_t>(k));
    svec.resize(static_cast<std::size_t>(k));
    m = mvec;
    s = svec;
  }
  int widest = 0;
  for (int w = 0; w < k; ++w) {
    m[static_cast<std::size_t>(w)] = state.arm(w).mean;
    s[static_cast<std::size_t>(w)] = std::sqrt(state.arm(w).var);
    if (s[static_cast<std::size_t>(w)] > s[static_cast<std::size_t>(widest)]) widest = w;
  }
  // The widest posterior is the hardest to integrate over (its competitors
  // look like steps); take it as the complement of the others.
  double rest = 0.0;
  for (int w = 0; w < k; ++w) {
    if (w == widest) continue;
    double p = 1.0;
    for (int j = 0; j < k; ++j) {
      if (j == w) continue;
      const double sd = std::hypot(s[static_cast<std::size_t>(w)], s[static_cast<std::size_t>(j)]);
      p = std::min(p, phi_cdf((m[static_cast<std::size_t>(w)] - m[static_cast<std::size_t>(j)]) / sd));
    }
    if (p > 1e-12) p = std::clamp(argmax_probability(w, m, s), 0.0, 1.0);
    else p = 0.0;
    out[static_cast<std::size_t>(w)] = p;
    rest += p;
  }
  if (rest > 1.0) {
    for (int w = 0; w < k; ++w) {
      if (w != widest) out[static_cast<std::size_t>(w)] /= rest;
    }
    out[static_cast<std::size_t>(widest)] = 0.0;
  } else {
    out[static_cast<std::size_t>(widest)] = 1.0 - rest;
  }
}

std::vector<double> thompson_exact_probs(const PosteriorState& state) {
  std::vector<double> out(static_cast<std::size_t>(state.num_arms()));
  thompson_exact_probs(state, out);
  return out;
}

void apply_floor(std::span<const double> raw, double floor,
                 std::span<double> out) {
  const std::size_t k = raw.size();
  if (out.size() != k) throw std::invalid_argument("apply_floor: size mismatch");
  const double kd = static_cast<double>(k);
  if (!(floor > 0.0) || floor * kd > 1.0 + 1e-15) {
    throw std::invalid_argument("apply_floor: floor must lie in (0, 1/K]");
  }
  const double budget = std::max(0.0, 1.0 - kd * floor);
  double excess = 0.0;
  for (double r : raw) {
    if (r >= floor) excess += r - floor;
  }
  const double c = excess > 0.0 ? budget / excess : 0.0;
  for (std::size_t w = 0; w < k; ++w) {
    out[w] = raw[w] < floor ? floor : floor + c * (raw[w] - floor);
  }
}

PropensityVector apply_floor(std::span<const double> raw, double floor) {
  PropensityVector p{std::vector<double>(raw.size()), floor};
  apply_floor(raw, floor, p.probs);
  return p;
}

double thompson_floor_value(int t, int num_arms, const ThompsonFloorParams& p) {
  if (t < 1) throw std::invalid_argument("t must be >= 1");
  const double x = p.floor_scale / num_arms * std::pow(static_cast<double>(t), -p.floor_exponent);
  return std::min(x, 1.0 / num_arms);
}

PropensityVector thompson_floor_step(const PosteriorState& state, int t,
                                     const ThompsonFloorParams& params,
                                     Rng& rng) {
  const double floor = thompson_floor_value(t, state.num_arms(), params);
  const std::vector<double> raw = params.num_draws > 0
                                      ? thompson_raw_probs(state, params.num_draws, rng)
                                      : thompson_exact_probs(state);
  return apply_floor(raw, floor);
}

PropensityVector two_stage_step(const BanditHistory& history, int t,
                                int horizon, const TwoStageParams& params) {
  if (history.num_arms() != 2) {
    throw std::invalid_argument("two_stage design requires exactly 2 arms");
  }
  if (horizon < 2 || horizon % 2 != 0) {
    throw std::invalid_argument("two_stage design requires an even horizon");
  }
  const int half = horizon / 2;
  if (t <= half) return PropensityVector{{0.5, 0.5}, 0.5};
  if (history.horizon() < half) {
    throw std::invalid_argument("two_stage: history shorter than T/2");
  }
  std::array<double, 2> sum{0.0, 0.0};
  std::array<long, 2> count{0, 0};
  for (int s = 1; s <= half; ++s) {
    const auto w = static_cast<std::size_t>(history.arm(s));
    sum[w] += history.reward(s);
    ++count[w];
  }
  auto mean = [&](std::size_t w) {
    return count[w] > 0 ? sum[w] / static_cast<double>(count[w])
                        : -std::numeric_limits<double>::infinity();
  };
  const double hi = params.exploit_prob;
  const double lo = 1.0 - hi;
  if (mean(0) >= mean(1)) return PropensityVector{{hi, lo}, lo};
  return PropensityVector{{lo, hi}, lo};
}

int sample_arm(std::span<const double> probs, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double u = unif(rng);
  double cum = 0.0;
  int last_positive = 0;
  for (std::size_t w = 0; w < probs.size(); ++w) {
    if (probs[w] <= 0.0) continue;
    last_positive = static_cast<int>(w);
    cum += probs[w];
    if (u < cum) return static_cast<int>(w);
  }
  return last_positive;
}

DesignSpec parse_design(std::string_view text) {
  if (text == "thompson_floor") return ThompsonFloorParams{};
  if (text == "two_stage") return TwoStageParams{};
  constexpr std::string_view kFixed = "fixed:";
  if (text.substr(0, kFixed.size()) == kFixed) {
    FixedParams fixed;
    std::string_view rest = text.substr(kFixed.size());
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const std::string item(rest.substr(0, comma));
      try {
        std::size_t used = 0;
        fixed.probs.push_back(std::stod(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw std::invalid_argument("bad probability '" + item + "' in design");
      }
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    if (fixed.probs.empty()) throw std::invalid_argument("fixed design needs probabilities");
    double sum = 0.0;
    for (double p : fixed.probs) {
      if (!(p >= 0.0)) throw std::invalid_argument("fixed design: negative probability");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
      throw std::invalid_argument("fixed design probabilities must sum to 1");
    }
    return fixed;
  }
  throw std::invalid_argument("unknown design '" + std::string(text) + "'");
}

std::string design_name(const DesignSpec& spec) {
  if (std::holds_alternative<ThompsonFloorParams>(spec)) return "thompson_floor";
  if (std::holds_alternative<TwoStageParams>(spec)) return "two_stage";
  std::ostringstream os;
  os.precision(17);
  os << "fixed:";
  const auto& probs = std::get<FixedParams>(spec).probs;
  for (std::size_t i = 0; i < probs.size(); ++i) os << (i ? "," : "") << probs[i];
  return os.str();
}

DesignRunner::DesignRunner(DesignSpec spec, int num_arms, int horizon)
    : spec_(std::move(spec)),
      num_arms_(num_arms),
      horizon_(horizon),
      posterior_(num_arms, 0.0, 1.0,
                 std::holds_alternative<ThompsonFloorParams>(spec_)
                     ? std::get<ThompsonFloorParams>(spec_).likelihood_var
                     : 1.0),
      raw_(static_cast<std::size_t>(num_arms)),
      cached_(static_cast<std::size_t>(num_arms)) {
  if (const auto* fixed = std::get_if<FixedParams>(&spec_)) {
    if (static_cast<int>(fixed->probs.size()) != num_arms) {
      throw std::invalid_argument("fixed design has " +
                                  std::to_string(fixed->probs.size()) +
                                  " probabilities for " +
                                  std::to_string(num_arms) + " arms");
    }
  }
  if (const auto* ts = std::get_if<ThompsonFloorParams>(&spec_)) {
    if (ts->batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
    if (ts->num_draws < 0) throw std::invalid_argument("num_draws must be >= 0");
    if (!(ts->floor_scale > 0.0 && ts->floor_scale <= 1.0)) {
      throw std::invalid_argument("floor_scale must lie in (0, 1]");
    }
  }
  if (std::holds_alternative<TwoStageParams>(spec_) &&
      (num_arms != 2 || horizon % 2 != 0)) {
    throw std::invalid_argument("two_stage design requires K = 2 and even T");
  }
}

void DesignRunner::propensities(int t, const BanditHistory& history, Rng& rng,
                                std::span<double> out) {
  if (const auto* ts = std::get_if<ThompsonFloorParams>(&spec_)) {
    if (t > cached_until_) {
      const double floor = thompson_floor_value(t, num_arms_, *ts);
      if (ts->num_draws > 0) {
        raw_ = thompson_raw_probs(posterior_, ts->num_draws, rng);
      } else {
        thompson_exact_probs(posterior_, raw_);
      }
      apply_floor(raw_, floor, cached_);
      cached_until_ = t + ts->batch_size - 1;
    }
    std::copy(cached_.begin(), cached_.end(), out.begin());
    return;
  }
  if (const auto* two = std::get_if<TwoStageParams>(&spec_)) {
    if (t <= horizon_ / 2) {
      std::fill(out.begin(), out.end(), 0.5);
      return;
    }
    // The second-stage vector is fixed once T/2 is reached.
    if (cached_until_ < t) {
      cached_ = two_stage_step(history, t, horizon_, *two).probs;
      cached_until_ = horizon_;
    }
    std::copy(cached_.begin(), cached_.end(), out.begin());
    return;
  }
  const auto& probs = std::get<FixedParams>(spec_).probs;
  std::copy(probs.begin(), probs.end(), out.begin());
}

void DesignRunner::observe(int arm, double reward) { posterior_.update(arm, reward); }

}  // namespace adaptci
