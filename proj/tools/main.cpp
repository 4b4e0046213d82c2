#include <algorithm>
#include <cmath>
#include <limits>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "adaptci/confseq.hpp"
#include "adaptci/evaluate.hpp"
#include "adaptci/figures.hpp"
#include "adaptci/history_log.hpp"
#include "adaptci/replication.hpp"
#include "adaptci/report_json.hpp"

namespace fs = std::filesystem;
using namespace adaptci;

namespace {

int default_threads() {
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

/// Fills every option of `app` that was not given on the command line from
/// the flat key = value file at `path`. Keys are long option names without
/// the leading dashes; unknown keys are an error.
void apply_config_file(CLI::App& app, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CLI::FileError::Missing(path);
  for (const auto& item : CLI::ConfigINI().from_config(in)) {
    if (!item.parents.empty()) {
      throw CLI::ConversionError("config sections are not supported: " + item.fullname());
    }
    if (item.name == "config") continue;
    CLI::Option* opt = app.get_option_no_throw("--" + item.name);
    if (opt == nullptr) {
      throw CLI::ConversionError("unknown config key '" + item.name + "' in " + path);
    }
    if (opt->count() == 0) {
      opt->add_result(item.inputs);
      opt->run_callback();
    }
  }
}

std::vector<double> parse_doubles(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

struct SimulateArgs {
  std::string config_file;
  std::string setting = "no_signal";
  std::string means;
  std::string noise = "uniform";
  double noise_scale = 1.0;
  std::string design = "thompson_floor";
  int num_draws = 10000;
  double floor_exponent = 0.7;
  int batch_size = 1;
  int horizon = 10000;
  std::vector<int> checkpoints;
  std::vector<std::string> estimators;
  std::vector<std::string> targets;
  long reps = 100;
  std::uint64_t seed = 1;
  double level = 0.95;
  double two_point_alpha = 0.7;
  int threads = default_threads();
  std::string out = "out";
  bool keep_histories = false;
  bool per_replication = false;
};

SimulationConfig build_config(const SimulateArgs& a) {
  SimulationConfig c;
  c.setting = a.setting;
  if (!a.means.empty()) {
    Noise noise = UniformNoise{a.noise_scale};
    if (a.noise == "normal") {
      noise = NormalNoise{a.noise_scale};
    } else if (a.noise != "uniform") {
      throw std::invalid_argument("noise must be uniform or normal");
    }
    c.model = ArmOutcomeModel(parse_doubles(a.means), noise);
  }
  c.design = parse_design(a.design);
  if (auto* ts = std::get_if<ThompsonFloorParams>(&c.design)) {
    ts->num_draws = a.num_draws;
    ts->floor_exponent = a.floor_exponent;
    ts->batch_size = a.batch_size;
  }
  c.horizon = a.horizon;
  c.checkpoints = a.checkpoints;
  c.replications = a.reps;
  c.seed = a.seed;
  c.level = a.level;
  c.two_point_alpha = a.two_point_alpha;
  c.threads = a.threads;
  c.out_dir = a.out;
  c.keep_histories = a.keep_histories;

  const ArmOutcomeModel model = c.resolved_model();
  if (a.estimators.empty()) {
    for (auto kind : all_estimators()) {
      if (kind == EstimatorKind::kHowardCs && !model.support(0)) continue;
      c.estimators.push_back(kind);
    }
  } else {
    for (const auto& name : a.estimators) c.estimators.push_back(parse_estimator(name));
  }
  if (a.targets.empty()) {
    const int k = model.num_arms();
    for (int w = 0; w < k; ++w) c.targets.push_back(ArmTarget{w});
    if (k >= 2) c.targets.push_back(ContrastTarget{k - 1, 0});
  } else {
    for (const auto& t : a.targets) c.targets.push_back(parse_target(t));
  }
  return c;
}

int run_simulate(const SimulateArgs& args) {
  const SimulationConfig config = build_config(args);
  config.validate();
  const fs::path out_dir(config.out_dir);
  fs::create_directories(out_dir);
  if (config.keep_histories) fs::create_directories(out_dir / "histories");

  std::ofstream per_rep;
  if (args.per_replication) {
    per_rep.open(out_dir / "replications.csv");
    per_rep << "replication,estimator,target,horizon,truth,point,variance,stderr,"
               "ci_lo,ci_hi,covers\n";
  }
  std::vector<std::string> outputs;
  const auto result = run_simulation(config, [&](const ReplicationResult& r) {
    if (per_rep.is_open()) {
      for (const auto& cell : r.cells) {
        const auto& rep = cell.outcome.report;
        if (!rep) continue;
        per_rep << r.index << ',' << rep->estimator_name << ','
                << target_label(cell.target) << ',' << cell.horizon << ','
                << format_double(cell.truth) << ',' << format_double(rep->point)
                << ',' << format_double(rep->variance) << ','
                << format_double(rep->std_error) << ',' << format_double(rep->ci_lo)
                << ',' << format_double(rep->ci_hi) << ','
                << (rep->covers(cell.truth) ? 1 : 0) << '\n';
      }
    }
    if (r.history) {
      std::ostringstream name;
      name << "rep_" << std::setw(6) << std::setfill('0') << r.index << ".jsonl";
      write_log_file(*r.history, (out_dir / "histories" / name.str()).string());
    }
  });
  if (per_rep.is_open()) outputs.push_back((out_dir / "replications.csv").string());

  {
    std::ofstream out(out_dir / "aggregate.csv");
    write_stats_csv_header(out);
    write_stats_csv_rows(out, result.stats);
    outputs.push_back((out_dir / "aggregate.csv").string());
  }
  {
    std::ofstream out(out_dir / "histogram.csv");
    write_histogram_csv_header(out);
    write_histogram_csv_rows(out, result.stats);
    outputs.push_back((out_dir / "histogram.csv").string());
  }
  {
    std::ofstream out(out_dir / "pulls.csv");
    out << "arm,mean_pulls,mean_pulls_se\n";
    for (std::size_t w = 0; w < result.pulls.mean.size(); ++w) {
      out << w << ',' << format_double(result.pulls.mean[w]) << ','
          << format_double(result.pulls.std_error[w]) << '\n';
    }
    outputs.push_back((out_dir / "pulls.csv").string());
  }
  if (config.keep_histories) outputs.push_back((out_dir / "histories").string());

  RunManifest manifest;
  manifest.command = "simulate";
  manifest.config = config_entries(config);
  manifest.base_seed = config.seed;
  manifest.replications = config.replications;
  manifest.seed_scheme = "splitmix64(base_seed, replication_index) -> mt19937_64 streams";
  manifest.outputs = outputs;
  manifest.wall_seconds = result.wall_seconds;
  write_manifest(manifest, (out_dir / "manifest.json").string());

  std::cout << "wrote " << outputs.size() + 1 << " files to " << out_dir.string()
            << " in " << std::fixed << std::setprecision(2) << result.wall_seconds
            << " s\n";
  return 0;
}

struct EstimateArgs {
  std::string log;
  int arm = -1;
  std::vector<int> contrast;
  std::string estimator = "aw_two_point";
  double level = 0.95;
  std::string plug_in = "running_mean";
  double two_point_alpha = 0.7;
  double lambda = 0.0;
  std::vector<double> support;
  double cs_variance = 0.0;
  double truth = std::numeric_limits<double>::quiet_NaN();
};

int run_estimate(const EstimateArgs& args) {
  const BanditHistory history = read_log_file(args.log);
  Target target;
  if (!args.contrast.empty()) {
    if (args.contrast.size() != 2) throw std::invalid_argument("--contrast needs w1,w2");
    target = ContrastTarget{args.contrast[0], args.contrast[1]};
  } else if (args.arm >= 0) {
    target = ArmTarget{args.arm};
  } else {
    throw std::invalid_argument("one of --arm or --contrast is required");
  }

  EstimatorOptions options;
  options.level = args.level;
  options.two_point_alpha = args.two_point_alpha;
  if (args.plug_in == "zero") {
    options.plug_in = PlugIn::zero();
  } else if (args.plug_in != "running_mean") {
    throw std::invalid_argument("--plug-in must be running_mean or zero");
  }
  if (args.lambda > 0.0) options.w_decorrelation_lambda = args.lambda;

  const EstimatorKind kind = parse_estimator(args.estimator);
  if (kind == EstimatorKind::kHowardCs) {
    if (args.support.size() != 2 || !(args.support[0] < args.support[1])) {
      throw std::invalid_argument("howard_cs needs --support lo,hi");
    }
    const Interval support{args.support[0], args.support[1]};
    // Without a known variance, tune at the worst case for the support.
    const double var = args.cs_variance > 0.0 ? args.cs_variance
                                              : 0.25 * support.width() * support.width();
    const double t_opt = floor_arm_intrinsic_time(history.horizon(), history.num_arms());
    for (int w = 0; w < history.num_arms(); ++w) {
      ConfSeqParams p;
      p.c = support.width();
      p.support = support;
      p.initial_predictor = 0.5 * (support.lo + support.hi);
      p.v_opt = var * std::max(t_opt, 1.0);
      options.confseq.push_back(p);
    }
  }

  const auto outcome = evaluate_estimator(history, kind, target, options);
  if (!outcome.report) {
    std::cerr << "estimate undefined: " << args.estimator << " for "
              << target_label(target)
              << " on this log (arm never pulled or zero propensity)\n";
    return 2;
  }
  EstimateReport report = *outcome.report;
  if (!std::isnan(args.truth)) attach_truth(report, args.truth);
  std::cout << report_to_json(report) << '\n';
  return 0;
}

struct FigureArgs {
  std::string id;
  std::string scale = "desk";
  std::string out = "figures";
  std::uint64_t seed = 1;
  int threads = default_threads();
  int horizon = 0;
  long reps = 0;
  int num_draws = 0;
};

int run_figure(const FigureArgs& args) {
  FigureOptions options;
  options.scale = parse_figure_scale(args.scale);
  options.out_dir = args.out;
  options.seed = args.seed;
  options.threads = args.threads;
  options.num_draws = args.num_draws;
  if (args.horizon > 0) options.horizon = args.horizon;
  if (args.reps > 0) options.replications = args.reps;
  const auto output = replicate_figure(parse_figure_id(args.id), options);
  for (const auto& f : output.files) std::cout << f << '\n';
  std::cerr << "done in " << std::fixed << std::setprecision(2) << output.wall_seconds
            << " s\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptively weighted inference for bandit experiments"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Run Monte Carlo replications");
  simulate->add_option("--config", sim.config_file, "Flat key = value file; flags win")
      ->check(CLI::ExistingFile);
  simulate->add_option("--setting", sim.setting,
                       "no_signal | low_signal | high_signal | intro_normal");
  simulate->add_option("--means", sim.means, "Explicit arm means (overrides --setting)");
  simulate->add_option("--noise", sim.noise, "uniform | normal (with --means)");
  simulate->add_option("--noise-scale", sim.noise_scale,
                       "Uniform half-width or normal sd (with --means)");
  simulate->add_option("--design", sim.design,
                       "thompson_floor | two_stage | fixed:p1,...,pK");
  simulate->add_option("--num-draws", sim.num_draws,
                       "Thompson posterior draws per step; 0 = exact limit");
  simulate->add_option("--floor-exponent", sim.floor_exponent);
  simulate->add_option("--batch-size", sim.batch_size);
  simulate->add_option("--horizon", sim.horizon, "Experiment length T");
  simulate->add_option("--checkpoints", sim.checkpoints, "Prefix lengths to evaluate")
      ->delimiter(',');
  simulate->add_option("--estimators", sim.estimators, "Estimator names")->delimiter(',');
  simulate->add_option("--targets", sim.targets, "arm:W or contrast:A-B")->delimiter(',');
  simulate->add_option("--reps", sim.reps, "Replications R");
  simulate->add_option("--seed", sim.seed, "Base seed");
  simulate->add_option("--level", sim.level, "Confidence level");
  simulate->add_option("--two-point-alpha", sim.two_point_alpha);
  simulate->add_option("--threads", sim.threads);
  simulate->add_option("--out", sim.out, "Output directory");
  simulate->add_flag("--keep-histories", sim.keep_histories,
                     "Write every replication's log to OUT/histories");
  simulate->add_flag("--per-replication", sim.per_replication,
                     "Write OUT/replications.csv with every report");

  EstimateArgs est;
  auto* estimate = app.add_subcommand("estimate", "Estimate from a logged experiment");
  estimate->add_option("--log", est.log, "JSONL history log")
      ->required()
      ->check(CLI::ExistingFile);
  estimate->add_option("--arm", est.arm, "Target arm (0-based)");
  estimate->add_option("--contrast", est.contrast, "w1,w2 for Q(w1) - Q(w2)")
      ->delimiter(',')
      ->expected(2);
  estimate->add_option("--estimator", est.estimator,
                       "sample_mean | ipw | aipw | aw_constant | aw_two_point | "
                       "weighted_average | w_decorrelation | howard_cs");
  estimate->add_option("--level", est.level, "Confidence level");
  estimate->add_option("--plug-in", est.plug_in, "running_mean | zero");
  estimate->add_option("--two-point-alpha", est.two_point_alpha);
  estimate->add_option("--lambda", est.lambda, "W-decorrelation tuning parameter");
  estimate->add_option("--support", est.support, "lo,hi reward support (howard_cs)")
      ->delimiter(',')
      ->expected(2);
  estimate->add_option("--cs-variance", est.cs_variance,
                       "Reward variance used to tune howard_cs");
  estimate->add_option("--truth", est.truth, "Attach a known true value");

  FigureArgs fig;
  auto* figure = app.add_subcommand("replicate-figure", "Write CSV data for a figure");
  figure->add_option("--id", fig.id,
                     "fig1_intro | fig2_contrast_evolution | fig3_histograms | "
                     "fig4_arm_values | appx_lambda_path")
      ->required();
  figure->add_option("--scale", fig.scale, "desk | paper");
  figure->add_option("--out", fig.out, "Output directory");
  figure->add_option("--seed", fig.seed, "Base seed");
  figure->add_option("--threads", fig.threads);
  figure->add_option("--horizon", fig.horizon, "Override T");
  figure->add_option("--reps", fig.reps, "Override R");
  figure->add_option("--num-draws", fig.num_draws,
                     "Thompson posterior draws per step; 0 = exact limit");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) {
      if (!sim.config_file.empty()) apply_config_file(*simulate, sim.config_file);
      return run_simulate(sim);
    }
    if (estimate->parsed()) return run_estimate(est);
    if (figure->parsed()) return run_figure(fig);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const LogParseError& e) {
    std::cerr << "error: " << est.log << ": " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
