#include <benchmark/benchmark.h>

#include <random>

#include "adaptci/designs.hpp"
#include "adaptci/evaluate.hpp"
#include "adaptci/replication.hpp"
#include "adaptci/weights.hpp"

namespace adaptci {
namespace {

PosteriorState sample_posterior(int k) {
  PosteriorState s(k);
  for (int w = 0; w < k; ++w) {
    for (int i = 0; i <= w * 3; ++i) s = posterior_update(s, w, 0.2 * w + 0.1 * i);
  }
  return s;
}

void BM_ThompsonExact(benchmark::State& state) {
  const auto post = sample_posterior(static_cast<int>(state.range(0)));
  std::vector<double> out(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    thompson_exact_probs(post, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_ThompsonExact)->Arg(2)->Arg(3)->Arg(5);

void BM_ThompsonMonteCarlo(benchmark::State& state) {
  const auto post = sample_posterior(3);
  Rng rng(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(thompson_raw_probs(post, static_cast<int>(state.range(0)), rng));
  }
}
BENCHMARK(BM_ThompsonMonteCarlo)->Arg(1000)->Arg(10000);

BanditHistory thompson_history(int horizon) {
  return run_design(make_setting("low_signal"), ThompsonFloorParams{0.7, 1.0, 0}, horizon, 1, 0);
}

void BM_BuildSchedule(benchmark::State& state) {
  const auto h = thompson_history(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_schedule(h, 0, WeightScheme::kTwoPointAllocation));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BuildSchedule)->Arg(10000)->Arg(100000);

void BM_AllEstimators(benchmark::State& state) {
  const auto h = thompson_history(static_cast<int>(state.range(0)));
  SimulationConfig config;
  config.setting = "low_signal";
  const auto options = estimator_options_for(config, make_setting("low_signal"));
  for (auto _ : state) {
    for (EstimatorKind kind : all_estimators()) {
      benchmark::DoNotOptimize(evaluate_estimator(h, kind, ContrastTarget{2, 0}, options));
    }
  }
}
BENCHMARK(BM_AllEstimators)->Arg(10000)->Unit(benchmark::kMillisecond);

// One full replication (design loop plus every estimator on every arm).
void BM_Replication(benchmark::State& state) {
  SimulationConfig config;
  config.setting = "high_signal";
  config.design = ThompsonFloorParams{0.7, 1.0, 0};
  config.horizon = static_cast<int>(state.range(0));
  config.estimators = all_estimators();
  config.targets = {ArmTarget{0}, ArmTarget{1}, ArmTarget{2}, ContrastTarget{2, 0}};
  long index = 0;
  for (auto _ : state) benchmark::DoNotOptimize(run_replication(config, index++));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Replication)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace adaptci
BENCHMARK_MAIN();
