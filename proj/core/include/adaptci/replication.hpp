#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "adaptci/aggregate.hpp"
#include "adaptci/designs.hpp"
#include "adaptci/environment.hpp"
#include "adaptci/evaluate.hpp"
#include "adaptci/history.hpp"

namespace adaptci {

struct SimulationConfig {
  /// Named setting; ignored when `model` is set.
  std::string setting = "no_signal";
  std::optional<ArmOutcomeModel> model;
  DesignSpec design = ThompsonFloorParams{};
  int horizon = 10000;
  /// Prefix lengths at which estimators are evaluated; empty means {horizon}.
  std::vector<int> checkpoints;
  std::vector<EstimatorKind> estimators;
  std::vector<Target> targets;
  long replications = 1;
  std::uint64_t seed = 0;
  double level = 0.95;
  double two_point_alpha = 0.7;
  /// Worker threads; results do not depend on this value.
  int threads = 1;
  std::string out_dir;
  /// Keep each replication's history in its result.
  bool keep_histories = false;

  ArmOutcomeModel resolved_model() const;
  std::vector<int> resolved_checkpoints() const;
  /// Throws std::invalid_argument describing the first problem found.
  void validate() const;
};

/// Ground truth Q(w) or Q(a) - Q(b) under `model`.
double target_truth(const ArmOutcomeModel& model, const Target& target);

/// One (estimator, target, horizon) evaluation.
struct CellOutcome {
  EstimatorKind estimator;
  Target target;
  int horizon = 0;
  double truth = 0.0;
  EstimatorOutcome outcome;
};

struct ReplicationResult {
  long index = 0;
  std::uint64_t seed = 0;
  /// Ordered by checkpoint, then estimator, then target.
  std::vector<CellOutcome> cells;
  std::vector<long> pull_counts;
  std::optional<BanditHistory> history;
};

/// Runs the design loop for `horizon` steps with the replication's own
/// environment/design/posterior streams.
BanditHistory run_design(const ArmOutcomeModel& model, const DesignSpec& design,
                         int horizon, std::uint64_t base_seed, long index);

/// Estimator options matching `config` (confidence-sequence parameters are
/// filled only for bounded models).
EstimatorOptions estimator_options_for(const SimulationConfig& config,
                                       const ArmOutcomeModel& model);

/// Evaluates every (checkpoint, estimator, target) cell on `history`.
std::vector<CellOutcome> evaluate_cells(const SimulationConfig& config,
                                        const ArmOutcomeModel& model,
                                        const BanditHistory& history);

/// Bit-reproducible given (config, index).
ReplicationResult run_replication(const SimulationConfig& config, long index);

struct PullCountStats {
  std::vector<double> mean;
  std::vector<double> std_error;
};

struct SimulationResult {
  std::vector<CellAccumulator> cells;
  std::vector<AggregateStats> stats;
  PullCountStats pulls;
  double wall_seconds = 0.0;
};

/// Runs replications 0..R-1 in fixed-size blocks spread over
/// `config.threads` workers and merges block accumulators in block order,
/// so the output is independent of the thread count. `on_result`, when
/// given, sees every replication (from worker threads, serialized).
SimulationResult run_simulation(
    const SimulationConfig& config,
    const std::function<void(const ReplicationResult&)>& on_result = {});

/// Applies `body(index)` to 0..count-1 on `threads` workers.
void parallel_for(long count, int threads, const std::function<void(long)>& body);

}  // namespace adaptci
