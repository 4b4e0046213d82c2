#include "adaptci/replication.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "adaptci/rng.hpp"

namespace adaptci {

namespace {

constexpr long kBlockSize = 64;

int target_max_arm(const Target& target) {
  if (const auto* a = std::get_if<ArmTarget>(&target)) return a->arm;
  const auto& c = std::get<ContrastTarget>(target);
  return std::max(c.first, c.second);
}

int target_min_arm(const Target& target) {
  if (const auto* a = std::get_if<ArmTarget>(&target)) return a->arm;
  const auto& c = std::get<ContrastTarget>(target);
  return std::min(c.first, c.second);
}

}  // namespace

ArmOutcomeModel SimulationConfig::resolved_model() const {
  if (model) return *model;
  return make_setting(setting);
}

std::vector<int> SimulationConfig::resolved_checkpoints() const {
  if (checkpoints.empty()) return {horizon};
  std::vector<int> out = checkpoints;
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void SimulationConfig::validate() const {
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  if (replications < 1) throw std::invalid_argument("replications must be >= 1");
  if (threads < 1) throw std::invalid_argument("threads must be >= 1");
  if (!(level > 0.0 && level < 1.0)) {
    throw std::invalid_argument("level must lie in (0, 1)");
  }
  for (int c : checkpoints) {
    if (c < 1 || c > horizon) {
      throw std::invalid_argument("checkpoint " + std::to_string(c) +
                                  " outside [1, horizon]");
    }
  }
  const ArmOutcomeModel m = resolved_model();  // throws on unknown setting
  const int k = m.num_arms();
  for (const auto& target : targets) {
    if (target_min_arm(target) < 0 || target_max_arm(target) >= k) {
      throw std::invalid_argument("target " + target_label(target) +
                                  " refers to an arm outside [0, K)");
    }
  }
  if (const auto* fixed = std::get_if<FixedParams>(&design)) {
    if (static_cast<int>(fixed->probs.size()) != k) {
      throw std::invalid_argument("fixed design has the wrong number of arms");
    }
  }
  if (std::holds_alternative<TwoStageParams>(design) &&
      (k != 2 || horizon % 2 != 0)) {
    throw std::invalid_argument("two_stage needs K = 2 and an even horizon");
  }
  const bool wants_cs = std::find(estimators.begin(), estimators.end(),
                                  EstimatorKind::kHowardCs) != estimators.end();
  if (wants_cs && !m.support(0)) {
    throw std::invalid_argument("howard_cs needs a bounded reward model");
  }
}

double target_truth(const ArmOutcomeModel& model, const Target& target) {
  if (const auto* a = std::get_if<ArmTarget>(&target)) return model.arm_mean(a->arm);
  const auto& c = std::get<ContrastTarget>(target);
  return model.arm_mean(c.first) - model.arm_mean(c.second);
}

BanditHistory run_design(const ArmOutcomeModel& model, const DesignSpec& design,
                         int horizon, std::uint64_t base_seed, long index) {
  const int k = model.num_arms();
  auto streams = ReplicationStreams::for_replication(base_seed, static_cast<std::uint64_t>(index));
  DesignRunner runner(design, k, horizon);
  BanditHistory history(k);
  history.reserve(horizon);
  std::vector<double> e(static_cast<std::size_t>(k));
  for (int t = 1; t <= horizon; ++t) {
    runner.propensities(t, history, streams.posterior, e);
    const int arm = sample_arm(e, streams.design);
    const double y = draw_reward(model, arm, streams.environment);
    history.append(e, arm, y);
    runner.observe(arm, y);
  }
  return history;
}

EstimatorOptions estimator_options_for(const SimulationConfig& config,
                                       const ArmOutcomeModel& model) {
  EstimatorOptions options;
  options.level = config.level;
  options.two_point_alpha = config.two_point_alpha;
  if (model.support(0)) {
    double exponent = 0.7;
    if (const auto* ts = std::get_if<ThompsonFloorParams>(&config.design)) {
      exponent = ts->floor_exponent;
    }
    for (int w = 0; w < model.num_arms(); ++w) {
      options.confseq.push_back(confseq_params_for(model, w, config.horizon, exponent));
    }
  }
  return options;
}

std::vector<CellOutcome> evaluate_cells(const SimulationConfig& config,
                                        const ArmOutcomeModel& model,
                                        const BanditHistory& history) {
  const EstimatorOptions options = estimator_options_for(config, model);
  std::vector<CellOutcome> cells;
  cells.reserve(config.resolved_checkpoints().size() * config.estimators.size() *
                config.targets.size());
  for (int checkpoint : config.resolved_checkpoints()) {
    std::optional<BanditHistory> prefix;
    if (checkpoint != history.horizon()) prefix = history.prefix(checkpoint);
    const BanditHistory& h = prefix ? *prefix : history;
    for (EstimatorKind kind : config.estimators) {
      for (const auto& target : config.targets) {
        CellOutcome cell{kind, target, checkpoint, target_truth(model, target), {}};
        cell.outcome = evaluate_estimator(h, kind, target, options);
        if (cell.outcome.report) attach_truth(*cell.outcome.report, cell.truth);
        cells.push_back(std::move(cell));
      }
    }
  }
  return cells;
}

ReplicationResult run_replication(const SimulationConfig& config, long index) {
  const ArmOutcomeModel model = config.resolved_model();
  ReplicationResult result;
  result.index = index;
  result.seed = replication_seed(config.seed, static_cast<std::uint64_t>(index));
  BanditHistory history = run_design(model, config.design, config.horizon, config.seed, index);
  result.cells = evaluate_cells(config, model, history);
  for (int w = 0; w < model.num_arms(); ++w) {
    result.pull_counts.push_back(history.pull_count(w));
  }
  if (config.keep_histories) result.history = std::move(history);
  return result;
}

void parallel_for(long count, int threads, const std::function<void(long)>& body) {
  if (count <= 0) return;
  const int workers = static_cast<int>(std::min<long>(std::max(threads, 1), count));
  if (workers == 1) {
    for (long i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<long> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (long i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(count);
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int i = 0; i < workers; ++i) pool.emplace_back(work);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

SimulationResult run_simulation(
    const SimulationConfig& config,
    const std::function<void(const ReplicationResult&)>& on_result) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const ArmOutcomeModel model = config.resolved_model();
  const int k = model.num_arms();

  std::vector<CellAccumulator> prototype;
  for (int checkpoint : config.resolved_checkpoints()) {
    for (EstimatorKind kind : config.estimators) {
      for (const auto& target : config.targets) {
        prototype.emplace_back(std::string(estimator_name(kind)),
                               target_label(target), checkpoint,
                               target_truth(model, target));
      }
    }
  }

  struct Block {
    std::vector<CellAccumulator> cells;
    std::vector<double> pull_sum;
    std::vector<double> pull_sum2;
  };
  const long num_blocks = (config.replications + kBlockSize - 1) / kBlockSize;
  std::vector<Block> blocks(static_cast<std::size_t>(num_blocks));
  std::mutex callback_mutex;

  parallel_for(num_blocks, config.threads, [&](long b) {
    Block block{prototype, std::vector<double>(static_cast<std::size_t>(k), 0.0),
                std::vector<double>(static_cast<std::size_t>(k), 0.0)};
    const long end = std::min(config.replications, (b + 1) * kBlockSize);
    for (long i = b * kBlockSize; i < end; ++i) {
      ReplicationResult r = run_replication(config, i);
      for (std::size_t c = 0; c < r.cells.size(); ++c) {
        block.cells[c].add(r.cells[c].outcome);
      }
      for (int w = 0; w < k; ++w) {
        const double n = static_cast<double>(r.pull_counts[static_cast<std::size_t>(w)]);
        block.pull_sum[static_cast<std::size_t>(w)] += n;
        block.pull_sum2[static_cast<std::size_t>(w)] += n * n;
      }
      if (on_result) {
        std::lock_guard<std::mutex> lock(callback_mutex);
        on_result(r);
      }
    }
    blocks[static_cast<std::size_t>(b)] = std::move(block);
  });

  SimulationResult result;
  result.cells = prototype;
  std::vector<double> pull_sum(static_cast<std::size_t>(k), 0.0);
  std::vector<double> pull_sum2(static_cast<std::size_t>(k), 0.0);
  for (const auto& block : blocks) {
    for (std::size_t c = 0; c < result.cells.size(); ++c) {
      result.cells[c].merge(block.cells[c]);
    }
    for (int w = 0; w < k; ++w) {
      pull_sum[static_cast<std::size_t>(w)] += block.pull_sum[static_cast<std::size_t>(w)];
      pull_sum2[static_cast<std::size_t>(w)] += block.pull_sum2[static_cast<std::size_t>(w)];
    }
  }
  for (const auto& cell : result.cells) result.stats.push_back(cell.finalize());
  const double n = static_cast<double>(config.replications);
  for (int w = 0; w < k; ++w) {
    const double mean = pull_sum[static_cast<std::size_t>(w)] / n;
    const double var = std::max(pull_sum2[static_cast<std::size_t>(w)] / n - mean * mean, 0.0);
    result.pulls.mean.push_back(mean);
    result.pulls.std_error.push_back(std::sqrt(var / std::max(n - 1.0, 1.0)));
  }
  result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace adaptci
