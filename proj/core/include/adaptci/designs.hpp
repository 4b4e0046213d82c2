#pragma once

#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "adaptci/rng.hpp"

namespace adaptci {

class BanditHistory;

/// Normal-normal conjugate posterior over each arm's mean.
struct ArmPosterior {
  double mean = 0.0;
  double var = 1.0;
  long pull_count = 0;
  double reward_sum = 0.0;
};

class PosteriorState {
 public:
  PosteriorState(int num_arms, double prior_mean = 0.0, double prior_var = 1.0,
                 double likelihood_var = 1.0);

  int num_arms() const { return static_cast<int>(arms_.size()); }
  const ArmPosterior& arm(int w) const { return arms_[static_cast<std::size_t>(w)]; }
  const std::vector<ArmPosterior>& arms() const { return arms_; }
  double prior_mean() const { return prior_mean_; }
  double prior_var() const { return prior_var_; }
  double likelihood_var() const { return likelihood_var_; }

  /// Adds one observation; mean and variance are recomputed from the
  /// sufficient statistics so the result does not depend on update order.
  void update(int arm, double reward);

 private:
  std::vector<ArmPosterior> arms_;
  double prior_mean_;
  double prior_var_;
  double likelihood_var_;
};

PosteriorState posterior_update(PosteriorState state, int arm, double reward);

/// Assignment probabilities e_t(.) together with the floor they satisfy.
struct PropensityVector {
  std::vector<double> probs;
  double floor_value = 0.0;
};

/// Fraction of `num_draws` joint posterior draws in which each arm is the
/// argmax. Ties go to the lowest index.
std::vector<double> thompson_raw_probs(const PosteriorState& state,
                                       int num_draws, Rng& rng);

/// Limit of thompson_raw_probs as num_draws grows: P(arm w is the argmax)
/// under independent normal posteriors. Closed form for K = 2, bivariate
/// normal orthant probabilities for K = 3, quadrature otherwise.
/// Absolute error is below 1e-8 per entry.
std::vector<double> thompson_exact_probs(const PosteriorState& state);
void thompson_exact_probs(const PosteriorState& state, std::span<double> out);

/// The one-dimensional quadrature used for K > 3; valid for any K.
void thompson_quadrature_probs(const PosteriorState& state, std::span<double> out);

/// Raises entries below `floor` to the floor and shrinks the rest toward it.
/// Throws std::invalid_argument unless 0 < floor <= 1/K.
PropensityVector apply_floor(std::span<const double> raw, double floor);
void apply_floor(std::span<const double> raw, double floor,
                 std::span<double> out);

struct ThompsonFloorParams {
  double floor_exponent = 0.7;
  /// floor x_t = floor_scale / K * t^(-floor_exponent)
  double floor_scale = 1.0;
  /// Posterior draws per step; 0 selects the exact (quadrature) limit.
  int num_draws = 10000;
  double likelihood_var = 1.0;
  int batch_size = 1;
};

double thompson_floor_value(int t, int num_arms, const ThompsonFloorParams& p);

PropensityVector thompson_floor_step(const PosteriorState& state, int t,
                                     const ThompsonFloorParams& params,
                                     Rng& rng);

/// First half uniform, second half 0.9 on the arm with the higher sample
/// mean at T/2 (ties and unpulled arms as in two_stage_step docs).
struct TwoStageParams {
  double exploit_prob = 0.9;
};

/// Requires K = 2 and even T. Throws std::invalid_argument otherwise.
PropensityVector two_stage_step(const BanditHistory& history, int t,
                                int horizon,
                                const TwoStageParams& params = {});

struct FixedParams {
  std::vector<double> probs;
};

/// Multinomial draw from `probs`.
int sample_arm(std::span<const double> probs, Rng& rng);

using DesignSpec = std::variant<ThompsonFloorParams, TwoStageParams, FixedParams>;

/// Parses "thompson_floor", "two_stage" or "fixed:p1,p2,...".
DesignSpec parse_design(std::string_view text);
std::string design_name(const DesignSpec& spec);

/// Drives one design through an experiment. Holds the per-replication
/// posterior and the batch cache; not shareable across replications.
class DesignRunner {
 public:
  DesignRunner(DesignSpec spec, int num_arms, int horizon);

  /// Writes e_t(.) into `out` given everything observed through t - 1.
  /// `history` must contain exactly steps 1..t-1.
  void propensities(int t, const BanditHistory& history, Rng& rng,
                    std::span<double> out);

  void observe(int arm, double reward);

  const DesignSpec& spec() const { return spec_; }

 private:
  DesignSpec spec_;
  int num_arms_;
  int horizon_;
  PosteriorState posterior_;
  std::vector<double> raw_;
  std::vector<double> cached_;
  int cached_until_ = 0;
};

}  // namespace adaptci
