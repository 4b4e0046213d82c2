#include "adaptci/figures.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <stdexcept>

#include "adaptci/replication.hpp"
#include "adaptci/report_json.hpp"
#include "adaptci/weights.hpp"

namespace adaptci {

namespace {

constexpr std::array<std::string_view, 3> kSettings = {"no_signal", "low_signal",
                                                       "high_signal"};

struct Writer {
  std::filesystem::path dir;
  std::vector<std::string> files;

  std::ofstream open(const std::string& name) {
    const auto path = dir / name;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    files.push_back(path.string());
    return out;
  }
};

SimulationConfig thompson_config(std::string_view setting, const FigureSize& size,
                                 const FigureOptions& options) {
  SimulationConfig config;
  config.setting = std::string(setting);
  ThompsonFloorParams ts;
  ts.num_draws = options.num_draws;
  config.design = ts;
  config.horizon = size.horizon;
  config.replications = size.replications;
  config.seed = options.seed;
  config.threads = options.threads;
  return config;
}

double run_fig1(const FigureSize& size, const FigureOptions& options, Writer& w,
                RunManifest& manifest) {
  SimulationConfig config;
  config.setting = "intro_normal";
  config.design = TwoStageParams{};
  config.horizon = size.horizon;
  config.replications = size.replications;
  config.seed = options.seed;
  config.threads = options.threads;
  config.estimators = {EstimatorKind::kSampleMean, EstimatorKind::kIpw,
                       EstimatorKind::kAwConstant};
  config.targets = {ArmTarget{0}};
  manifest.config = config_entries(config);

  const std::size_t n_est = config.estimators.size();
  const double scale = std::sqrt(static_cast<double>(config.horizon));
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> scaled(static_cast<std::size_t>(config.replications) * n_est, nan);
  std::vector<double> studentized(scaled.size(), nan);
  const auto result = run_simulation(config, [&](const ReplicationResult& r) {
    for (std::size_t c = 0; c < r.cells.size(); ++c) {
      const auto& report = r.cells[c].outcome.report;
      if (!report) continue;
      const std::size_t slot = static_cast<std::size_t>(r.index) * n_est + c;
      scaled[slot] = scale * (report->point - r.cells[c].truth);
      studentized[slot] = aggregate_studentized(*report, r.cells[c].truth);
    }
  });

  auto out = w.open("fig1_intro.csv");
  out << "replication,estimator,target,horizon,scaled_estimate,studentized\n";
  for (long i = 0; i < config.replications; ++i) {
    for (std::size_t c = 0; c < n_est; ++c) {
      const std::size_t slot = static_cast<std::size_t>(i) * n_est + c;
      if (std::isnan(scaled[slot])) continue;
      out << i << ',' << estimator_name(config.estimators[c]) << ",arm:0,"
          << config.horizon << ',' << format_double(scaled[slot]) << ','
          << format_double(studentized[slot]) << '\n';
    }
  }
  auto summary = w.open("fig1_intro_summary.csv");
  write_stats_csv_header(summary);
  write_stats_csv_rows(summary, result.stats);
  return result.wall_seconds;
}

double run_settings(const FigureSize& size, const FigureOptions& options,
                    const std::vector<EstimatorKind>& estimators,
                    const std::vector<Target>& targets,
                    const std::vector<int>& checkpoints, Writer& w,
                    const std::string& stats_file, const std::string& hist_file,
                    RunManifest& manifest) {
  double wall = 0.0;
  std::ofstream stats_out = w.open(stats_file);
  write_stats_csv_header(stats_out, {{"setting", ""}});
  std::ofstream hist_out;
  if (!hist_file.empty()) {
    hist_out = w.open(hist_file);
    write_histogram_csv_header(hist_out, {{"setting", ""}});
  }
  for (std::string_view setting : kSettings) {
    SimulationConfig config = thompson_config(setting, size, options);
    config.estimators = estimators;
    config.targets = targets;
    config.checkpoints = checkpoints;
    if (manifest.config.empty()) {
      manifest.config = config_entries(config);
      manifest.config.front() = {"setting", "no_signal,low_signal,high_signal"};
    }
    const auto result = run_simulation(config);
    wall += result.wall_seconds;
    const CsvColumns prefix = {{"setting", std::string(setting)}};
    write_stats_csv_rows(stats_out, result.stats, prefix);
    if (hist_out.is_open()) write_histogram_csv_rows(hist_out, result.stats, prefix);
  }
  return wall;
}

double run_lambda_path(const FigureSize& size, const FigureOptions& options,
                       Writer& w, RunManifest& manifest) {
  auto out = w.open("appx_lambda_path.csv");
  out << "setting,arm,role,t,mean_scaled_lambda,mean_propensity,replications\n";
  double wall = 0.0;
  for (std::string_view setting : kSettings) {
    SimulationConfig config = thompson_config(setting, size, options);
    if (manifest.config.empty()) {
      manifest.config = config_entries(config);
      manifest.config.front() = {"setting", "no_signal,low_signal,high_signal"};
    }
    const auto start = std::chrono::steady_clock::now();
    const ArmOutcomeModel model = config.resolved_model();
    const int horizon = config.horizon;
    const int bad = 0;
    const int good = model.num_arms() - 1;
    const std::size_t len = static_cast<std::size_t>(horizon);
    std::vector<double> lambda_sum(2 * len, 0.0);
    std::vector<double> e_sum(2 * len, 0.0);
    std::mutex mu;
    parallel_for(config.replications, config.threads, [&](long index) {
      const BanditHistory history =
          run_design(model, config.design, horizon, config.seed, index);
      std::array<WeightSchedule, 2> schedules = {
          build_schedule(history, bad, WeightScheme::kTwoPointAllocation),
          build_schedule(history, good, WeightScheme::kTwoPointAllocation)};
      std::lock_guard<std::mutex> lock(mu);
      for (std::size_t a = 0; a < 2; ++a) {
        const int arm = a == 0 ? bad : good;
        for (int t = 1; t <= horizon; ++t) {
          const std::size_t i = static_cast<std::size_t>(t - 1);
          lambda_sum[a * len + i] += (horizon - t) * schedules[a].lambda[i];
          e_sum[a * len + i] += history.propensity(t, arm);
        }
      }
    });
    const double r = static_cast<double>(config.replications);
    for (std::size_t a = 0; a < 2; ++a) {
      for (int t = 1; t <= horizon; ++t) {
        const std::size_t i = a * len + static_cast<std::size_t>(t - 1);
        out << setting << ',' << (a == 0 ? bad : good) << ','
            << (a == 0 ? "bad" : "good") << ',' << t << ','
            << format_double(lambda_sum[i] / r) << ','
            << format_double(e_sum[i] / r) << ',' << config.replications << '\n';
      }
    }
    wall += std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  return wall;
}

}  // namespace

FigureId parse_figure_id(std::string_view name) {
  for (FigureId id : all_figure_ids()) {
    if (figure_id_name(id) == name) return id;
  }
  throw std::invalid_argument("unknown figure id '" + std::string(name) + "'");
}

std::string_view figure_id_name(FigureId id) {
  switch (id) {
    case FigureId::kFig1Intro: return "fig1_intro";
    case FigureId::kFig2ContrastEvolution: return "fig2_contrast_evolution";
    case FigureId::kFig3Histograms: return "fig3_histograms";
    case FigureId::kFig4ArmValues: return "fig4_arm_values";
    case FigureId::kAppxLambdaPath: return "appx_lambda_path";
  }
  return "";
}

const std::vector<FigureId>& all_figure_ids() {
  static const std::vector<FigureId> ids = {
      FigureId::kFig1Intro, FigureId::kFig2ContrastEvolution,
      FigureId::kFig3Histograms, FigureId::kFig4ArmValues,
      FigureId::kAppxLambdaPath};
  return ids;
}

FigureScale parse_figure_scale(std::string_view name) {
  if (name == "desk") return FigureScale::kDesk;
  if (name == "paper") return FigureScale::kPaper;
  throw std::invalid_argument("unknown scale '" + std::string(name) +
                              "' (expected desk or paper)");
}

FigureSize figure_size(FigureId id, FigureScale scale) {
  const bool paper = scale == FigureScale::kPaper;
  switch (id) {
    case FigureId::kFig1Intro:
      return paper ? FigureSize{1000000, 1000000} : FigureSize{10000, 100000};
    case FigureId::kAppxLambdaPath:
      return paper ? FigureSize{20000, 1000} : FigureSize{10000, 100};
    default:
      return paper ? FigureSize{100000, 100000} : FigureSize{10000, 10000};
  }
}

std::vector<int> evolution_checkpoints(int horizon) {
  std::vector<int> out;
  for (long decade = 100; decade <= horizon; decade *= 10) {
    for (long m : {1L, 2L, 5L}) {
      if (decade * m < horizon) out.push_back(static_cast<int>(decade * m));
    }
  }
  out.push_back(horizon);
  return out;
}

FigureOutput replicate_figure(FigureId id, const FigureOptions& options) {
  FigureSize size = figure_size(id, options.scale);
  if (options.horizon) size.horizon = *options.horizon;
  if (options.replications) size.replications = *options.replications;
  if (size.horizon < 1 || size.replications < 1) {
    throw std::invalid_argument("figure size must be positive");
  }

  std::filesystem::create_directories(options.out_dir);
  Writer w{options.out_dir, {}};
  RunManifest manifest;
  manifest.command = "replicate-figure --id " + std::string(figure_id_name(id)) +
                     " --scale " + (options.scale == FigureScale::kPaper ? "paper" : "desk");
  manifest.base_seed = options.seed;
  manifest.replications = size.replications;
  manifest.seed_scheme = "splitmix64(base_seed, replication_index) -> mt19937_64 streams";

  const Target contrast = ContrastTarget{2, 0};
  double wall = 0.0;
  switch (id) {
    case FigureId::kFig1Intro:
      wall = run_fig1(size, options, w, manifest);
      break;
    case FigureId::kFig2ContrastEvolution:
      wall = run_settings(size, options,
                          {EstimatorKind::kSampleMean, EstimatorKind::kAipw,
                           EstimatorKind::kAwConstant, EstimatorKind::kAwTwoPoint,
                           EstimatorKind::kHowardCs},
                          {contrast}, evolution_checkpoints(size.horizon), w,
                          "fig2_contrast_evolution.csv", "", manifest);
      break;
    case FigureId::kFig3Histograms:
      wall = run_settings(size, options,
                          {EstimatorKind::kSampleMean, EstimatorKind::kAipw,
                           EstimatorKind::kAwConstant, EstimatorKind::kAwTwoPoint},
                          {contrast}, {}, w, "fig3_histograms_summary.csv",
                          "fig3_histograms.csv", manifest);
      break;
    case FigureId::kFig4ArmValues:
      wall = run_settings(size, options,
                          {EstimatorKind::kSampleMean, EstimatorKind::kAipw,
                           EstimatorKind::kAwConstant, EstimatorKind::kAwTwoPoint,
                           EstimatorKind::kWDecorrelation, EstimatorKind::kHowardCs},
                          {ArmTarget{0}, ArmTarget{2}}, {}, w,
                          "fig4_arm_values.csv", "", manifest);
      break;
    case FigureId::kAppxLambdaPath:
      wall = run_lambda_path(size, options, w, manifest);
      break;
  }
  manifest.outputs = w.files;
  manifest.wall_seconds = wall;
  const auto manifest_path =
      (w.dir / (std::string(figure_id_name(id)) + "_manifest.json")).string();
  write_manifest(manifest, manifest_path);
  FigureOutput output{w.files, wall};
  output.files.push_back(manifest_path);
  return output;
}

}  // namespace adaptci
