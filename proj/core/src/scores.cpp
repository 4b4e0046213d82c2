#include "adaptci/scores.hpp"

#include <stdexcept>

namespace adaptci {

std::string target_label(const Target& target) {
  if (const auto* a = std::get_if<ArmTarget>(&target)) {
    return "arm:" + std::to_string(a->arm);
  }
  const auto& c = std::get<ContrastTarget>(target);
  return "contrast:" + std::to_string(c.first) + "-" + std::to_string(c.second);
}

Target parse_target(const std::string& text) {
  try {
    if (text.rfind("arm:", 0) == 0) {
      std::size_t used = 0;
      const std::string rest = text.substr(4);
      const int arm = std::stoi(rest, &used);
      if (used == rest.size()) return ArmTarget{arm};
    } else if (text.rfind("contrast:", 0) == 0) {
      const std::string rest = text.substr(9);
      const auto dash = rest.find('-');
      if (dash != std::string::npos) {
        std::size_t u1 = 0;
        std::size_t u2 = 0;
        const std::string a = rest.substr(0, dash);
        const std::string b = rest.substr(dash + 1);
        const int first = std::stoi(a, &u1);
        const int second = std::stoi(b, &u2);
        if (u1 == a.size() && u2 == b.size()) return ContrastTarget{first, second};
      }
    }
  } catch (const std::logic_error&) {
  }
  throw std::invalid_argument("bad target '" + text +
                              "' (expected arm:W or contrast:W1-W2)");
}

namespace {

double inverse_propensity_indicator(const StepRecord& record, int arm) {
  if (arm < 0 || arm >= static_cast<int>(record.propensities.size())) {
    throw std::out_of_range("score: arm index out of range");
  }
  const double e = record.propensities[static_cast<std::size_t>(arm)];
  if (!(e > 0.0)) {
    throw std::domain_error("step " + std::to_string(record.t) + ": arm " +
                            std::to_string(arm) + " has zero propensity");
  }
  return record.arm == arm ? 1.0 / e : 0.0;
}

}  // namespace

double ipw_score(const StepRecord& record, int arm) {
  return inverse_propensity_indicator(record, arm) * record.reward;
}

double aipw_score(const StepRecord& record, int arm, double plug_in) {
  const double g = inverse_propensity_indicator(record, arm);
  return g * record.reward + (1.0 - g) * plug_in;
}

double contrast_score(const StepRecord& record, int first, int second,
                      double plug_in_first, double plug_in_second) {
  return aipw_score(record, first, plug_in_first) -
         aipw_score(record, second, plug_in_second);
}

std::vector<double> plug_in_series(const BanditHistory& history, int arm,
                                   const PlugIn& plug_in) {
  switch (plug_in.kind) {
    case PlugIn::Kind::kRunningMean:
      return lagged_means(history, arm);
    case PlugIn::Kind::kZero:
      return std::vector<double>(static_cast<std::size_t>(history.horizon()), 0.0);
    case PlugIn::Kind::kOracle:
      if (arm < 0 || arm >= static_cast<int>(plug_in.oracle_values.size())) {
        throw std::invalid_argument("oracle plug-in has no value for arm " +
                                    std::to_string(arm));
      }
      return std::vector<double>(static_cast<std::size_t>(history.horizon()),
                                 plug_in.oracle_values[static_cast<std::size_t>(arm)]);
  }
  throw std::invalid_argument("unknown plug-in kind");
}

ScoreSeries arm_scores(const BanditHistory& history, int arm, ScoreKind kind,
                       const PlugIn& plug_in) {
  ScoreSeries out{ArmTarget{arm}, kind, {}};
  out.values.resize(static_cast<std::size_t>(history.horizon()));
  if (kind == ScoreKind::kIpw) {
    for (int t = 1; t <= history.horizon(); ++t) {
      out.values[static_cast<std::size_t>(t - 1)] = ipw_score(history.step(t), arm);
    }
    return out;
  }
  const std::vector<double> m = plug_in_series(history, arm, plug_in);
  for (int t = 1; t <= history.horizon(); ++t) {
    out.values[static_cast<std::size_t>(t - 1)] =
        aipw_score(history.step(t), arm, m[static_cast<std::size_t>(t - 1)]);
  }
  return out;
}

ScoreSeries contrast_scores(const BanditHistory& history, int first, int second,
                            const PlugIn& plug_in) {
  ScoreSeries out{ContrastTarget{first, second}, ScoreKind::kAipw, {}};
  out.values.resize(static_cast<std::size_t>(history.horizon()));
  const std::vector<double> m1 = plug_in_series(history, first, plug_in);
  const std::vector<double> m2 = plug_in_series(history, second, plug_in);
  for (int t = 1; t <= history.horizon(); ++t) {
    const auto i = static_cast<std::size_t>(t - 1);
    out.values[i] = contrast_score(history.step(t), first, second, m1[i], m2[i]);
  }
  return out;
}

}  // namespace adaptci
