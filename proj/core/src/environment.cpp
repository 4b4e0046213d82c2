#include "adaptci/environment.hpp"

#include <cmath>
#include <stdexcept>

namespace adaptci {

ArmOutcomeModel::ArmOutcomeModel(std::vector<double> arm_means, Noise noise)
    : arm_means_(std::move(arm_means)), noise_(noise) {
  if (arm_means_.empty()) {
    throw std::invalid_argument("ArmOutcomeModel: at least one arm required");
  }
  for (double q : arm_means_) {
    if (!std::isfinite(q)) {
      throw std::invalid_argument("ArmOutcomeModel: arm means must be finite");
    }
  }
  if (const auto* u = std::get_if<UniformNoise>(&noise_)) {
    if (!(u->half_width >= 0.0) || !std::isfinite(u->half_width)) {
      throw std::invalid_argument("ArmOutcomeModel: bad uniform half-width");
    }
  } else if (const auto* n = std::get_if<NormalNoise>(&noise_)) {
    if (!(n->sd >= 0.0) || !std::isfinite(n->sd)) {
      throw std::invalid_argument("ArmOutcomeModel: bad normal sd");
    }
  }
}

double ArmOutcomeModel::arm_mean(int arm) const {
  if (arm < 0 || arm >= num_arms()) {
    throw std::out_of_range("arm index " + std::to_string(arm) +
                            " out of range");
  }
  return arm_means_[static_cast<std::size_t>(arm)];
}

double ArmOutcomeModel::noise_variance() const {
  if (const auto* u = std::get_if<UniformNoise>(&noise_)) {
    return u->half_width * u->half_width / 3.0;
  }
  const double sd = std::get<NormalNoise>(noise_).sd;
  return sd * sd;
}

std::optional<Interval> ArmOutcomeModel::support(int arm) const {
  const double q = arm_mean(arm);
  if (const auto* u = std::get_if<UniformNoise>(&noise_)) {
    return Interval{q - u->half_width, q + u->half_width};
  }
  if (std::get<NormalNoise>(noise_).sd == 0.0) return Interval{q, q};
  return std::nullopt;
}

Setting parse_setting(std::string_view name) {
  if (name == "no_signal") return Setting::kNoSignal;
  if (name == "low_signal") return Setting::kLowSignal;
  if (name == "high_signal") return Setting::kHighSignal;
  if (name == "intro_normal") return Setting::kIntroNormal;
  throw std::invalid_argument("unknown setting '" + std::string(name) + "'");
}

std::string_view setting_name(Setting setting) {
  switch (setting) {
    case Setting::kNoSignal: return "no_signal";
    case Setting::kLowSignal: return "low_signal";
    case Setting::kHighSignal: return "high_signal";
    case Setting::kIntroNormal: return "intro_normal";
  }
  return "unknown";
}

ArmOutcomeModel make_setting(Setting setting) {
  // K = 3 settings use Q(w) indexed from w = 1; arm index 0 is w = 1.
  switch (setting) {
    case Setting::kNoSignal:
      return ArmOutcomeModel({1.0, 1.0, 1.0}, UniformNoise{1.0});
    case Setting::kLowSignal:
      return ArmOutcomeModel({1.0, 1.1, 1.2}, UniformNoise{1.0});
    case Setting::kHighSignal:
      return ArmOutcomeModel({1.0, 1.5, 2.0}, UniformNoise{1.0});
    case Setting::kIntroNormal:
      return ArmOutcomeModel({0.0, 0.0}, NormalNoise{1.0});
  }
  throw std::invalid_argument("unknown setting");
}

ArmOutcomeModel make_setting(std::string_view name) {
  return make_setting(parse_setting(name));
}

double draw_reward(const ArmOutcomeModel& model, int arm, Rng& rng) {
  const double q = model.arm_mean(arm);
  if (const auto* u = std::get_if<UniformNoise>(&model.noise())) {
    if (u->half_width == 0.0) return q;
    std::uniform_real_distribution<double> noise(-u->half_width, u->half_width);
    return q + noise(rng);
  }
  const double sd = std::get<NormalNoise>(model.noise()).sd;
  if (sd == 0.0) return q;
  std::normal_distribution<double> noise(0.0, sd);
  return q + noise(rng);
}

}  // namespace adaptci
