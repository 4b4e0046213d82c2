#pragma once

#include <string>
#include <variant>
#include <vector>

#include "adaptci/history.hpp"

namespace adaptci {

struct ArmTarget {
  int arm = 0;
  friend bool operator==(const ArmTarget&, const ArmTarget&) = default;
};

/// Q(first) - Q(second).
struct ContrastTarget {
  int first = 0;
  int second = 0;
  friend bool operator==(const ContrastTarget&, const ContrastTarget&) = default;
};

using Target = std::variant<ArmTarget, ContrastTarget>;

/// "arm:2" or "contrast:2-0", with 0-based arm indices.
std::string target_label(const Target& target);
Target parse_target(const std::string& text);

enum class ScoreKind { kIpw, kAipw };

/// Per-step unbiased scores for one target.
struct ScoreSeries {
  Target target;
  ScoreKind kind = ScoreKind::kAipw;
  std::vector<double> values;
};

/// 1{W_t = arm} Y_t / e_t(arm). Throws std::domain_error if e_t(arm) <= 0.
double ipw_score(const StepRecord& record, int arm);

/// IPW score plus the control variate (1 - 1{W_t = arm}/e_t(arm)) m_t.
/// `plug_in` must depend on steps before t only.
double aipw_score(const StepRecord& record, int arm, double plug_in);

double contrast_score(const StepRecord& record, int first, int second,
                      double plug_in_first, double plug_in_second);

/// Source of the plug-in regression estimate m_t(w).
struct PlugIn {
  enum class Kind { kRunningMean, kZero, kOracle };
  Kind kind = Kind::kRunningMean;
  /// Per-arm constants for kOracle (typically the true Q(w)).
  std::vector<double> oracle_values;

  static PlugIn running_mean() { return {}; }
  static PlugIn zero() { return {Kind::kZero, {}}; }
  static PlugIn oracle(std::vector<double> values) {
    return {Kind::kOracle, std::move(values)};
  }
};

/// m_t(arm) for t = 1..T.
std::vector<double> plug_in_series(const BanditHistory& history, int arm,
                                   const PlugIn& plug_in);

/// IPW ignores `plug_in` (it is the AIPW score with m = 0).
ScoreSeries arm_scores(const BanditHistory& history, int arm, ScoreKind kind,
                       const PlugIn& plug_in = PlugIn::running_mean());

ScoreSeries contrast_scores(const BanditHistory& history, int first, int second,
                            const PlugIn& plug_in = PlugIn::running_mean());

}  // namespace adaptci
