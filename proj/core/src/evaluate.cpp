#include "adaptci/evaluate.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace adaptci {

EstimatorKind parse_estimator(std::string_view name) {
  for (EstimatorKind k : all_estimators()) {
    if (estimator_name(k) == name) return k;
  }
  throw std::invalid_argument("unknown estimator '" + std::string(name) + "'");
}

std::string_view estimator_name(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::kSampleMean: return "sample_mean";
    case EstimatorKind::kIpw: return "ipw";
    case EstimatorKind::kAipw: return "aipw";
    case EstimatorKind::kAwConstant: return "aw_constant";
    case EstimatorKind::kAwTwoPoint: return "aw_two_point";
    case EstimatorKind::kWeightedAverage: return "weighted_average";
    case EstimatorKind::kWDecorrelation: return "w_decorrelation";
    case EstimatorKind::kHowardCs: return "howard_cs";
  }
  return "unknown";
}

const std::vector<EstimatorKind>& all_estimators() {
  static const std::vector<EstimatorKind> kinds = {
      EstimatorKind::kSampleMean,   EstimatorKind::kIpw,
      EstimatorKind::kAipw,         EstimatorKind::kAwConstant,
      EstimatorKind::kAwTwoPoint,   EstimatorKind::kWeightedAverage,
      EstimatorKind::kWDecorrelation, EstimatorKind::kHowardCs};
  return kinds;
}

namespace {

struct ArmOutcome {
  std::optional<EstimateReport> report;
  std::optional<WeightDiagnostics> weights;
};

WeightScheme scheme_for(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::kAwConstant: return WeightScheme::kConstantAllocation;
    case EstimatorKind::kAwTwoPoint: return WeightScheme::kTwoPointAllocation;
    default: return WeightScheme::kUniform;
  }
}

std::optional<EstimateReport> howard_arm(const BanditHistory& history, int arm,
                                         double level,
                                         const EstimatorOptions& options) {
  if (arm < 0 || arm >= static_cast<int>(options.confseq.size())) {
    throw std::invalid_argument("howard_cs needs confidence-sequence parameters for arm " +
                                std::to_string(arm));
  }
  auto mean = sample_mean_estimate(history, arm, level);
  const ConfSeqParams& params = options.confseq[static_cast<std::size_t>(arm)];
  ConfSeqState state;
  for (int t = 1; t <= history.horizon(); ++t) {
    if (history.arm(t) == arm) {
      state = confseq_update(state, history.reward(t), params.initial_predictor);
    }
  }
  const Interval ci = confseq_interval(state, level, params);
  EstimateReport r;
  if (mean) {
    r = *mean;
  } else {
    // No data: the interval is the known support; the point is its centre.
    r.target = ArmTarget{arm};
    r.horizon = history.horizon();
    r.point = 0.5 * (ci.lo + ci.hi);
    r.level = level;
  }
  r.estimator_name = "howard_cs";
  r.ci_lo = ci.lo;
  r.ci_hi = ci.hi;
  return r;
}

ArmOutcome evaluate_arm(const BanditHistory& history, EstimatorKind kind,
                        int arm, double level, const EstimatorOptions& options) {
  if (arm < 0 || arm >= history.num_arms()) {
    throw std::out_of_range("estimator target arm " + std::to_string(arm) + " out of range");
  }
  switch (kind) {
    case EstimatorKind::kSampleMean:
      return {sample_mean_estimate(history, arm, level), std::nullopt};
    case EstimatorKind::kHowardCs:
      return {howard_arm(history, arm, level, options), std::nullopt};
    case EstimatorKind::kWDecorrelation: {
      const double lambda = options.w_decorrelation_lambda.value_or(
          default_w_decorrelation_lambda(history.pull_count(arm), history.horizon()));
      return {w_decorrelation_estimate(history, arm, lambda, level), std::nullopt};
    }
    case EstimatorKind::kWeightedAverage: {
      const auto schedule = build_schedule(history, arm, options.weighted_average_scheme,
                                           options.two_point_alpha);
      return {weighted_average_estimate(history, arm, schedule, level),
              weight_diagnostics(history, schedule)};
    }
    case EstimatorKind::kIpw:
    case EstimatorKind::kAipw:
    case EstimatorKind::kAwConstant:
    case EstimatorKind::kAwTwoPoint: {
      if (history.empty()) return {};
      for (int t = 1; t <= history.horizon(); ++t) {
        if (!(history.propensity(t, arm) > 0.0)) return {};
      }
      const ScoreKind score_kind = kind == EstimatorKind::kIpw ? ScoreKind::kIpw : ScoreKind::kAipw;
      const auto scores = arm_scores(history, arm, score_kind, options.plug_in);
      const auto schedule = build_schedule(history, arm, scheme_for(kind), options.two_point_alpha);
      return {weighted_arm_estimate(std::string(estimator_name(kind)), scores, schedule, level),
              weight_diagnostics(history, schedule)};
    }
  }
  throw std::invalid_argument("unknown estimator");
}

}  // namespace

EstimatorOutcome evaluate_estimator(const BanditHistory& history,
                                    EstimatorKind kind, const Target& target,
                                    const EstimatorOptions& options) {
  EstimatorOutcome out;
  if (const auto* a = std::get_if<ArmTarget>(&target)) {
    auto arm = evaluate_arm(history, kind, a->arm, options.level, options);
    out.report = std::move(arm.report);
    if (arm.weights) {
      out.diagnostics.effective_sample_size = arm.weights->effective_sample_size;
      out.diagnostics.lyapunov_ratio = arm.weights->lyapunov_ratio;
    }
    return out;
  }

  const auto& c = std::get<ContrastTarget>(target);
  if (kind == EstimatorKind::kHowardCs) {
    // Bonferroni: each arm at 1 - (1 - level)/2.
    const double arm_level = 1.0 - 0.5 * (1.0 - options.level);
    auto first = evaluate_arm(history, kind, c.first, arm_level, options).report;
    auto second = evaluate_arm(history, kind, c.second, arm_level, options).report;
    if (!first || !second) return out;
    const Interval ci = contrast_union_interval({second->ci_lo, second->ci_hi},
                                                {first->ci_lo, first->ci_hi});
    EstimateReport r;
    r.estimator_name = "howard_cs";
    r.target = c;
    r.horizon = history.horizon();
    r.point = first->point - second->point;
    r.variance = first->variance + second->variance;
    r.std_error = std::sqrt(r.variance);
    r.level = options.level;
    r.ci_lo = ci.lo;
    r.ci_hi = ci.hi;
    out.report = r;
    return out;
  }

  auto first = evaluate_arm(history, kind, c.first, options.level, options);
  auto second = evaluate_arm(history, kind, c.second, options.level, options);
  if (!first.report || !second.report) return out;
  out.report = contrast_estimate(*first.report, *second.report);
  if (second.report->variance > 0.0) {
    out.diagnostics.variance_ratio = first.report->variance / second.report->variance;
  }
  if (first.weights && second.weights) {
    out.diagnostics.effective_sample_size =
        std::min(first.weights->effective_sample_size, second.weights->effective_sample_size);
    out.diagnostics.lyapunov_ratio =
        std::max(first.weights->lyapunov_ratio, second.weights->lyapunov_ratio);
  }
  return out;
}

}  // namespace adaptci
