#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "adaptci/aggregate.hpp"
#include "adaptci/figures.hpp"
#include "adaptci/replication.hpp"
#include "adaptci/report_json.hpp"

namespace adaptci {
namespace {

namespace fs = std::filesystem;

SimulationConfig small_config() {
  SimulationConfig c;
  c.setting = "low_signal";
  ThompsonFloorParams tf;
  tf.num_draws = 0;
  c.design = tf;
  c.horizon = 300;
  c.checkpoints = {100, 300};
  c.estimators = {EstimatorKind::kSampleMean, EstimatorKind::kAipw,
                  EstimatorKind::kAwTwoPoint, EstimatorKind::kWDecorrelation};
  c.targets = {ArmTarget{0}, ArmTarget{2}, ContrastTarget{2, 0}};
  c.replications = 150;
  c.seed = 17;
  return c;
}

TEST(Replication, DeterministicPerIndex) {
  auto config = small_config();
  config.keep_histories = true;
  const auto a = run_replication(config, 42);
  const auto b = run_replication(config, 42);
  ASSERT_TRUE(a.history && b.history);
  EXPECT_EQ(*a.history, *b.history);
  ASSERT_EQ(a.cells.size(), b.cells.size());
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    ASSERT_EQ(a.cells[i].outcome.report.has_value(), b.cells[i].outcome.report.has_value());
    if (a.cells[i].outcome.report) {
      EXPECT_EQ(a.cells[i].outcome.report->point, b.cells[i].outcome.report->point);
    }
  }
  const auto c = run_replication(config, 43);
  EXPECT_FALSE(*a.history == *c.history);
  EXPECT_EQ(a.cells.size(), 2u * 4u * 3u);
}

TEST(Replication, PrefixCheckpointsMatchShorterRuns) {
  // A checkpoint is the estimator evaluated on the first t steps.
  auto config = small_config();
  config.keep_histories = true;
  const auto r = run_replication(config, 5);
  const auto model = config.resolved_model();
  const auto prefix = r.history->prefix(100);
  const auto options = estimator_options_for(config, model);
  for (const auto& cell : r.cells) {
    if (cell.horizon != 100) continue;
    const auto direct = evaluate_estimator(prefix, cell.estimator, cell.target, options).report;
    ASSERT_EQ(direct.has_value(), cell.outcome.report.has_value());
    if (direct) {
      EXPECT_EQ(direct->point, cell.outcome.report->point);
    }
  }
}

TEST(Replication, FixedDesignLeavesOtherArmsUndefined) {
  SimulationConfig config;
  config.setting = "low_signal";
  config.design = FixedParams{{1.0, 0.0, 0.0}};
  config.horizon = 50;
  config.estimators = {EstimatorKind::kSampleMean, EstimatorKind::kAipw};
  config.targets = {ArmTarget{0}, ArmTarget{1}, ArmTarget{2}};
  config.replications = 3;
  const auto r = run_replication(config, 0);
  for (const auto& cell : r.cells) {
    const bool arm0 = std::get<ArmTarget>(cell.target).arm == 0;
    EXPECT_EQ(cell.outcome.report.has_value(), arm0) << target_label(cell.target);
  }
  EXPECT_EQ(r.pull_counts[0], 50);
  EXPECT_EQ(r.pull_counts[1], 0);
}

TEST(Replication, TwoStageHalfUniform) {
  SimulationConfig config;
  config.setting = "intro_normal";
  config.design = TwoStageParams{};
  config.horizon = 400;
  config.estimators = {EstimatorKind::kIpw};
  config.targets = {ArmTarget{0}};
  const auto model = config.resolved_model();
  const auto h = run_design(model, config.design, 400, 3, 0);
  ASSERT_EQ(h.horizon(), 400);
  int uniform = 0;
  for (int t = 1; t <= 400; ++t) {
    if (h.propensity(t, 0) == 0.5 && h.propensity(t, 1) == 0.5) ++uniform;
  }
  EXPECT_EQ(uniform, 200);
  for (int t = 201; t <= 400; ++t) {
    EXPECT_EQ(std::max(h.propensity(t, 0), h.propensity(t, 1)), 0.9);
  }
}

TEST(Replication, ConfigValidation) {
  auto c = small_config();
  c.checkpoints = {500};
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = small_config();
  c.setting = "intro_normal";
  c.targets = {ArmTarget{0}};
  c.estimators = {EstimatorKind::kHowardCs};
  EXPECT_THROW(run_simulation(c), std::invalid_argument);  // unbounded rewards
  c = small_config();
  c.replications = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(Aggregate, ExactPointsGiveZeroError) {
  CellAccumulator acc("x", "arm:0", 10, 1.0);
  for (int i = 0; i < 20; ++i) {
    EstimateReport r;
    r.target = ArmTarget{0};
    r.point = 1.0;
    r.variance = 0.0;
    r.ci_lo = r.ci_hi = 1.0;
    acc.add(r);
  }
  const auto s = acc.finalize();
  EXPECT_EQ(s.bias, 0.0);
  EXPECT_EQ(s.rmse, 0.0);
  EXPECT_EQ(s.coverage, 1.0);
  EXPECT_EQ(s.defined, 20);
}

TEST(Aggregate, MissingReportsExcludedFromCoverage) {
  CellAccumulator acc("x", "arm:0", 10, 0.0);
  EstimateReport r;
  r.point = 0.5;
  r.variance = 1.0;
  r.ci_lo = -1.0;
  r.ci_hi = 2.0;
  acc.add(r);
  acc.add(std::optional<EstimateReport>{});
  acc.add(std::optional<EstimateReport>{});
  const auto s = acc.finalize();
  EXPECT_EQ(s.replications, 3);
  EXPECT_EQ(s.defined, 1);
  EXPECT_EQ(s.coverage, 1.0);
}

TEST(Aggregate, StandardNormalStudentizedStatistics) {
  Rng rng(12);
  std::normal_distribution<double> z(0.0, 1.0);
  CellAccumulator acc("x", "arm:0", 10, 0.0);
  for (int i = 0; i < 100000; ++i) {
    EstimateReport r;
    r.point = z(rng);
    r.variance = 1.0;
    r.std_error = 1.0;
    r.ci_lo = r.point - 1.959963984540054;
    r.ci_hi = r.point + 1.959963984540054;
    acc.add(r);
  }
  const auto s = acc.finalize();
  EXPECT_LT(s.ks_distance, 0.006);
  EXPECT_NEAR(s.coverage, 0.95, 4.0 * s.coverage_se);
  EXPECT_NEAR(s.excess_kurtosis, 0.0, 0.1);
  EXPECT_EQ(s.histogram.total(), s.defined);
  EXPECT_GE(s.rmse * s.rmse + 1e-15, s.bias * s.bias);
  EXPECT_NEAR(s.mean_width, 2.0 * 1.959963984540054, 1e-9);
}

TEST(Aggregate, HistogramBins) {
  EXPECT_EQ(StudentizedHistogram::bin_of(-7.0), 0);
  EXPECT_EQ(StudentizedHistogram::bin_of(-5.0), 1);
  EXPECT_EQ(StudentizedHistogram::bin_of(0.0), 26);
  EXPECT_EQ(StudentizedHistogram::bin_of(4.99), 50);
  EXPECT_EQ(StudentizedHistogram::bin_of(5.0), 51);
  EXPECT_EQ(StudentizedHistogram::bin_of(INFINITY), 51);
  EXPECT_EQ(StudentizedHistogram::lower_edge(1), -5.0);
  EXPECT_TRUE(std::isinf(StudentizedHistogram::lower_edge(0)));
}

TEST(Aggregate, KsDistanceExamples) {
  EXPECT_NEAR(ks_distance_normal({0.0}), 0.5, 1e-15);
  EXPECT_NEAR(ks_distance_normal({-100.0, 100.0}), 0.5, 1e-15);
}

TEST(Aggregate, MergeIsAssociative) {
  Rng rng(13);
  std::normal_distribution<double> z(0.3, 2.0);
  auto make = [&](int n) {
    CellAccumulator acc("x", "arm:0", 10, 0.0);
    for (int i = 0; i < n; ++i) {
      EstimateReport r;
      r.point = z(rng);
      r.variance = 1.5;
      r.std_error = std::sqrt(1.5);
      r.ci_lo = r.point - 2.0;
      r.ci_hi = r.point + 2.5;
      acc.add(r);
    }
    return acc;
  };
  const auto a = make(300);
  const auto b = make(170);
  const auto c = make(500);
  CellAccumulator left = a;
  left.merge(b);
  left.merge(c);
  CellAccumulator bc = b;
  bc.merge(c);
  CellAccumulator right = a;
  right.merge(bc);
  const auto l = left.finalize();
  const auto r = right.finalize();
  EXPECT_EQ(l.defined, 970);
  EXPECT_NEAR(l.bias, r.bias, 1e-9);
  EXPECT_NEAR(l.rmse, r.rmse, 1e-9);
  EXPECT_NEAR(l.excess_kurtosis, r.excess_kurtosis, 1e-9);
  EXPECT_NEAR(l.coverage, r.coverage, 1e-12);
  EXPECT_NEAR(l.ks_distance, r.ks_distance, 1e-12);
  EXPECT_EQ(l.histogram.counts, r.histogram.counts);
}

TEST(Simulation, IndependentOfThreadCount) {
  auto config = small_config();
  config.threads = 1;
  const auto one = run_simulation(config);
  config.threads = 3;
  const auto three = run_simulation(config);
  ASSERT_EQ(one.stats.size(), three.stats.size());
  for (std::size_t i = 0; i < one.stats.size(); ++i) {
    EXPECT_EQ(one.stats[i].estimator, three.stats[i].estimator);
    EXPECT_EQ(one.stats[i].target, three.stats[i].target);
    EXPECT_NEAR(one.stats[i].bias, three.stats[i].bias, 1e-12);
    EXPECT_NEAR(one.stats[i].rmse, three.stats[i].rmse, 1e-12);
    EXPECT_EQ(one.stats[i].coverage, three.stats[i].coverage);
    EXPECT_EQ(one.stats[i].histogram.counts, three.stats[i].histogram.counts);
  }
  EXPECT_EQ(one.pulls.mean, three.pulls.mean);
}

TEST(Simulation, CallbackSeesEveryReplication) {
  auto config = small_config();
  config.replications = 70;
  config.threads = 2;
  std::vector<int> seen(70, 0);
  run_simulation(config, [&](const ReplicationResult& r) { ++seen[static_cast<std::size_t>(r.index)]; });
  for (int s : seen) EXPECT_EQ(s, 1);
}

TEST(ReportJson, Keys) {
  EstimateReport r;
  r.estimator_name = "aw_two_point";
  r.target = ContrastTarget{2, 0};
  r.horizon = 100;
  r.point = 0.25;
  r.variance = 0.01;
  r.std_error = 0.1;
  r.ci_lo = 0.05;
  r.ci_hi = 0.45;
  const auto j = nlohmann::json::parse(report_to_json(r));
  for (const char* key : {"estimator", "target", "horizon", "point", "variance", "stderr",
                          "ci_lo", "ci_hi", "level"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_FALSE(j.contains("truth"));
  EXPECT_EQ(j["target"], "contrast:2-0");
  EXPECT_EQ(j["point"].get<double>(), 0.25);
  attach_truth(r, 0.2);
  const auto k = nlohmann::json::parse(report_to_json(r));
  EXPECT_NEAR(k["studentized"].get<double>(), 0.5, 1e-12);
}

TEST(ReportJson, ManifestFields) {
  RunManifest m;
  m.command = "simulate";
  m.config = config_entries(small_config());
  m.base_seed = 17;
  m.replications = 150;
  m.seed_scheme = "splitmix64(base, index)";
  m.outputs = {"aggregate.csv"};
  m.wall_seconds = 1.5;
  const auto j = nlohmann::json::parse(manifest_to_json(m));
  for (const char* key : {"command", "config", "seeds", "outputs", "wall_seconds", "git_hash"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j["seeds"]["base_seed"].get<std::uint64_t>(), 17u);
  EXPECT_EQ(j["seeds"]["replications"].get<long>(), 150);
  EXPECT_FALSE(j["git_hash"].get<std::string>().empty());
  EXPECT_EQ(j["config"]["setting"], "low_signal");
  EXPECT_EQ(format_double(0.1), "0.1");
}

TEST(Figures, SizesAndIds) {
  for (FigureId id : all_figure_ids()) {
    EXPECT_EQ(parse_figure_id(figure_id_name(id)), id);
    const auto desk = figure_size(id, FigureScale::kDesk);
    const auto paper = figure_size(id, FigureScale::kPaper);
    EXPECT_LE(desk.horizon, paper.horizon);
    EXPECT_LE(desk.replications, paper.replications);
  }
  EXPECT_THROW(parse_figure_id("fig9"), std::invalid_argument);
  const auto grid = evolution_checkpoints(10000);
  EXPECT_EQ(grid.front(), 100);
  EXPECT_EQ(grid.back(), 10000);
  EXPECT_TRUE(std::is_sorted(grid.begin(), grid.end()));
}

TEST(Figures, SmokeRunWritesTidyFiles) {
  const fs::path dir = fs::temp_directory_path() / "adaptci_fig_smoke";
  fs::remove_all(dir);
  for (FigureId id : all_figure_ids()) {
    FigureOptions o;
    o.out_dir = dir.string();
    o.horizon = 200;
    o.replications = 6;
    o.threads = 2;
    const auto out = replicate_figure(id, o);
    ASSERT_FALSE(out.files.empty());
    for (const auto& f : out.files) {
      ASSERT_TRUE(fs::exists(f)) << f;
      std::ifstream in(f);
      std::string header;
      std::getline(in, header);
      EXPECT_FALSE(header.empty()) << f;
    }
    const fs::path manifest = dir / (std::string(figure_id_name(id)) + "_manifest.json");
    ASSERT_TRUE(fs::exists(manifest));
    std::ifstream in(manifest);
    const auto j = nlohmann::json::parse(in);
    EXPECT_EQ(j["seeds"]["replications"].get<long>(), 6);
  }
  fs::remove_all(dir);
}

}  // namespace
}  // namespace adaptci
