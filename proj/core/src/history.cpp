#include "adaptci/history.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace adaptci {

BanditHistory::BanditHistory(int num_arms) : num_arms_(num_arms) {
  if (num_arms < 1) {
    throw std::invalid_argument("BanditHistory: num_arms must be >= 1");
  }
}

void BanditHistory::reserve(int steps) {
  const auto n = static_cast<std::size_t>(steps);
  propensities_.reserve(n * static_cast<std::size_t>(num_arms_));
  arms_.reserve(n);
  rewards_.reserve(n);
}

void BanditHistory::append(std::span<const double> propensities, int arm,
                           double reward) {
  const int t = horizon() + 1;
  auto fail = [t](const std::string& what) {
    throw std::invalid_argument("step " + std::to_string(t) + ": " + what);
  };
  if (static_cast<int>(propensities.size()) != num_arms_) {
    fail("propensity vector has " + std::to_string(propensities.size()) +
         " entries, expected " + std::to_string(num_arms_));
  }
  if (arm < 0 || arm >= num_arms_) {
    fail("arm index " + std::to_string(arm) + " out of range");
  }
  double sum = 0.0;
  for (double e : propensities) {
    if (!std::isfinite(e) || e < 0.0) fail("invalid propensity entry");
    sum += e;
  }
  if (std::abs(sum - 1.0) > 1e-12) fail("propensities are not normalized");
  if (!(propensities[static_cast<std::size_t>(arm)] > 0.0)) {
    fail("chosen arm has zero propensity");
  }
  if (!std::isfinite(reward)) fail("reward is not finite");
  propensities_.insert(propensities_.end(), propensities.begin(),
                       propensities.end());
  arms_.push_back(arm);
  rewards_.push_back(reward);
}

StepRecord BanditHistory::step(int t) const {
  return StepRecord{t, propensities(t), arm(t), reward(t)};
}

std::span<const double> BanditHistory::propensities(int t) const {
  if (t < 1 || t > horizon()) {
    throw std::out_of_range("step " + std::to_string(t) + " out of range");
  }
  return std::span<const double>(propensities_).subspan(
      static_cast<std::size_t>(t - 1) * num_arms_,
      static_cast<std::size_t>(num_arms_));
}

BanditHistory BanditHistory::prefix(int steps) const {
  if (steps < 0 || steps > horizon()) {
    throw std::out_of_range("prefix length out of range");
  }
  BanditHistory out(num_arms_);
  const auto n = static_cast<std::size_t>(steps);
  out.propensities_.assign(propensities_.begin(),
                           propensities_.begin() + n * num_arms_);
  out.arms_.assign(arms_.begin(), arms_.begin() + n);
  out.rewards_.assign(rewards_.begin(), rewards_.begin() + n);
  return out;
}

long BanditHistory::pull_count(int arm) const {
  long n = 0;
  for (int a : arms_) n += (a == arm);
  return n;
}

BanditHistory BanditHistory::transformed_rewards(double scale,
                                                 double shift) const {
  BanditHistory out = *this;
  for (double& y : out.rewards_) y = scale * y + shift;
  return out;
}

RunningArmStats::RunningArmStats(int num_arms)
    : count_(static_cast<std::size_t>(num_arms), 0),
      mean_(static_cast<std::size_t>(num_arms), 0.0),
      m2_(static_cast<std::size_t>(num_arms), 0.0) {}

void RunningArmStats::add(int arm, double reward) {
  const auto w = static_cast<std::size_t>(arm);
  const long n = ++count_[w];
  const double delta = reward - mean_[w];
  mean_[w] += delta / static_cast<double>(n);
  m2_[w] += delta * (reward - mean_[w]);
}

double lagged_mean(const RunningArmStats& stats, int arm) {
  return stats.count(arm) == 0 ? 0.0 : stats.mean(arm);
}

std::vector<double> lagged_means(const BanditHistory& history, int arm) {
  const int horizon = history.horizon();
  std::vector<double> out(static_cast<std::size_t>(horizon));
  long count = 0;
  double mean = 0.0;
  for (int t = 1; t <= horizon; ++t) {
    out[static_cast<std::size_t>(t - 1)] = mean;
    if (history.arm(t) == arm) {
      ++count;
      mean += (history.reward(t) - mean) / static_cast<double>(count);
    }
  }
  return out;
}

}  // namespace adaptci
