#pragma once

#include <span>
#include <vector>

namespace adaptci {

/// One step of an experiment, viewed in place inside a BanditHistory.
struct StepRecord {
  int t = 0;  // 1-based
  std::span<const double> propensities;
  int arm = 0;
  double reward = 0.0;
};

/// Ordered log H^T of (e_t(.), W_t, Y_t). Stored column-wise; propensities
/// are a dense T x K row-major block.
class BanditHistory {
 public:
  explicit BanditHistory(int num_arms);

  int num_arms() const { return num_arms_; }
  int horizon() const { return static_cast<int>(arms_.size()); }
  bool empty() const { return arms_.empty(); }

  void reserve(int steps);

  /// Appends step t = horizon() + 1. Throws std::invalid_argument if the
  /// propensity vector has the wrong size, a negative or non-finite entry,
  /// does not sum to one within 1e-12, or gives the chosen arm probability 0.
  void append(std::span<const double> propensities, int arm, double reward);

  /// 1-based access.
  StepRecord step(int t) const;
  std::span<const double> propensities(int t) const;
  double propensity(int t, int arm) const {
    return propensities_[static_cast<std::size_t>(t - 1) * num_arms_ + arm];
  }
  int arm(int t) const { return arms_[static_cast<std::size_t>(t - 1)]; }
  double reward(int t) const { return rewards_[static_cast<std::size_t>(t - 1)]; }

  const std::vector<int>& arms() const { return arms_; }
  const std::vector<double>& rewards() const { return rewards_; }

  /// Steps 1..steps as a new history.
  BanditHistory prefix(int steps) const;

  /// Pull count T_w over the whole history.
  long pull_count(int arm) const;

  /// Rewards multiplied by `scale` then shifted by `shift`.
  BanditHistory transformed_rewards(double scale, double shift) const;

  friend bool operator==(const BanditHistory&, const BanditHistory&) = default;

 private:
  int num_arms_;
  std::vector<double> propensities_;
  std::vector<int> arms_;
  std::vector<double> rewards_;
};

/// Per-arm running count, mean and sum of squared deviations (Welford).
class RunningArmStats {
 public:
  explicit RunningArmStats(int num_arms);

  void add(int arm, double reward);

  long count(int arm) const { return count_[static_cast<std::size_t>(arm)]; }
  double mean(int arm) const { return mean_[static_cast<std::size_t>(arm)]; }
  double sum_sq_dev(int arm) const { return m2_[static_cast<std::size_t>(arm)]; }
  int num_arms() const { return static_cast<int>(count_.size()); }

 private:
  std::vector<long> count_;
  std::vector<double> mean_;
  std::vector<double> m2_;
};

/// Sample mean of `arm` so far, or 0 before the first pull.
double lagged_mean(const RunningArmStats& stats, int arm);

/// m_t(arm) for t = 1..T, each computed from steps 1..t-1 only.
std::vector<double> lagged_means(const BanditHistory& history, int arm);

}  // namespace adaptci
