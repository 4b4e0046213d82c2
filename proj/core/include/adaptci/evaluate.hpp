#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "adaptci/confseq.hpp"
#include "adaptci/estimators.hpp"
#include "adaptci/scores.hpp"
#include "adaptci/weights.hpp"

namespace adaptci {

enum class EstimatorKind {
  kSampleMean,
  kIpw,
  kAipw,
  kAwConstant,
  kAwTwoPoint,
  kWeightedAverage,
  kWDecorrelation,
  kHowardCs,
};

EstimatorKind parse_estimator(std::string_view name);
std::string_view estimator_name(EstimatorKind kind);
const std::vector<EstimatorKind>& all_estimators();

struct EstimatorOptions {
  double level = 0.95;
  /// Decay exponent used by two-point allocation.
  double two_point_alpha = 0.7;
  PlugIn plug_in = PlugIn::running_mean();
  WeightScheme weighted_average_scheme = WeightScheme::kTwoPointAllocation;
  /// Fixed decorrelation tuning parameter; per-arm default when empty.
  std::optional<double> w_decorrelation_lambda;
  /// Per-arm confidence-sequence parameters; required for howard_cs.
  std::vector<ConfSeqParams> confseq;
};

/// Assumption proxies exported alongside a report.
struct EstimateDiagnostics {
  std::optional<double> effective_sample_size;
  std::optional<double> lyapunov_ratio;
  /// V(first) / V(second) for contrasts.
  std::optional<double> variance_ratio;
};

struct EstimatorOutcome {
  std::optional<EstimateReport> report;
  EstimateDiagnostics diagnostics;
};

/// Evaluates one estimator on one target. The report is empty when the
/// estimate is undefined on this history (arm never pulled, target arm with
/// zero propensity, all-zero weights).
EstimatorOutcome evaluate_estimator(const BanditHistory& history,
                                    EstimatorKind kind, const Target& target,
                                    const EstimatorOptions& options);

}  // namespace adaptci
