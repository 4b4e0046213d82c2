#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "adaptci/rng.hpp"

namespace adaptci {

struct UniformNoise {
  double half_width = 1.0;
};

struct NormalNoise {
  double sd = 1.0;
};

using Noise = std::variant<UniformNoise, NormalNoise>;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  bool contains(double x) const { return lo <= x && x <= hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Stationary potential-outcome model: Y(w) = Q(w) + noise, with mean-zero
/// noise shared by every arm.
class ArmOutcomeModel {
 public:
  ArmOutcomeModel(std::vector<double> arm_means, Noise noise);

  int num_arms() const { return static_cast<int>(arm_means_.size()); }
  const std::vector<double>& arm_means() const { return arm_means_; }
  double arm_mean(int arm) const;
  const Noise& noise() const { return noise_; }

  /// Var(Y(w)); identical for all arms.
  double noise_variance() const;

  /// Known support of Y(w); empty for unbounded (normal) noise.
  std::optional<Interval> support(int arm) const;

 private:
  std::vector<double> arm_means_;
  Noise noise_;
};

enum class Setting { kNoSignal, kLowSignal, kHighSignal, kIntroNormal };

Setting parse_setting(std::string_view name);
std::string_view setting_name(Setting setting);

ArmOutcomeModel make_setting(Setting setting);
ArmOutcomeModel make_setting(std::string_view name);

/// Q(arm) plus one noise draw. Throws std::out_of_range for a bad arm.
double draw_reward(const ArmOutcomeModel& model, int arm, Rng& rng);

}  // namespace adaptci
