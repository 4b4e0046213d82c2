#include "adaptci/report_json.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "json.hpp"

#ifndef ADAPTCI_GIT_HASH
#define ADAPTCI_GIT_HASH "unknown"
#endif

namespace adaptci {

namespace {

using nlohmann::ordered_json;

ordered_json number_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

void write_prefix_header(std::ostream& out, const CsvColumns& prefix) {
  for (const auto& [name, value] : prefix) out << name << ',';
}

void write_prefix_values(std::ostream& out, const CsvColumns& prefix) {
  for (const auto& [name, value] : prefix) out << value << ',';
}

std::string optional_cell(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

}  // namespace

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string report_to_json(const EstimateReport& report, int indent) {
  ordered_json j;
  j["estimator"] = report.estimator_name;
  j["target"] = target_label(report.target);
  j["horizon"] = report.horizon;
  j["point"] = number_or_null(report.point);
  j["variance"] = number_or_null(report.variance);
  j["stderr"] = number_or_null(report.std_error);
  j["ci_lo"] = number_or_null(report.ci_lo);
  j["ci_hi"] = number_or_null(report.ci_hi);
  j["level"] = report.level;
  if (report.studentized) j["studentized"] = number_or_null(*report.studentized);
  if (report.truth) j["truth"] = number_or_null(*report.truth);
  return j.dump(indent);
}

void write_stats_csv_header(std::ostream& out, const CsvColumns& prefix) {
  write_prefix_header(out, prefix);
  out << "estimator,target,horizon,truth,replications,defined,mean_point,bias,"
         "bias_se,rmse,rmse_se,sd,excess_kurtosis,coverage,coverage_se,"
         "mean_width,width_se,ks_distance,mean_ess,mean_lyapunov_ratio,"
         "mean_variance_ratio\n";
}

void write_stats_csv_rows(std::ostream& out, const std::vector<AggregateStats>& stats,
                          const CsvColumns& prefix) {
  for (const auto& s : stats) {
    write_prefix_values(out, prefix);
    out << s.estimator << ',' << s.target << ',' << s.horizon << ','
        << format_double(s.truth) << ',' << s.replications << ',' << s.defined
        << ',' << format_double(s.mean_point) << ',' << format_double(s.bias)
        << ',' << format_double(s.bias_se) << ',' << format_double(s.rmse)
        << ',' << format_double(s.rmse_se) << ',' << format_double(s.sd) << ','
        << format_double(s.excess_kurtosis) << ',' << format_double(s.coverage)
        << ',' << format_double(s.coverage_se) << ','
        << format_double(s.mean_width) << ',' << format_double(s.width_se)
        << ',' << format_double(s.ks_distance) << ','
        << optional_cell(s.mean_effective_sample_size) << ','
        << optional_cell(s.mean_lyapunov_ratio) << ','
        << optional_cell(s.mean_variance_ratio) << '\n';
  }
}

void write_histogram_csv_header(std::ostream& out, const CsvColumns& prefix) {
  write_prefix_header(out, prefix);
  out << "estimator,target,horizon,bin,lower,upper,count\n";
}

void write_histogram_csv_rows(std::ostream& out,
                              const std::vector<AggregateStats>& stats,
                              const CsvColumns& prefix) {
  constexpr int kBins = StudentizedHistogram::kInnerBins + 2;
  for (const auto& s : stats) {
    for (int i = 0; i < kBins; ++i) {
      const double lo = StudentizedHistogram::lower_edge(i);
      const double hi = i + 1 < kBins ? StudentizedHistogram::lower_edge(i + 1)
                                      : std::numeric_limits<double>::infinity();
      write_prefix_values(out, prefix);
      out << s.estimator << ',' << s.target << ',' << s.horizon << ',' << i
          << ',' << format_double(lo) << ',' << format_double(hi) << ','
          << s.histogram.counts[static_cast<std::size_t>(i)] << '\n';
    }
  }
}

std::vector<std::pair<std::string, std::string>> config_entries(
    const SimulationConfig& config) {
  std::vector<std::pair<std::string, std::string>> out;
  if (config.model) {
    std::string means;
    for (std::size_t i = 0; i < config.model->arm_means().size(); ++i) {
      means += (i ? "," : "") + format_double(config.model->arm_means()[i]);
    }
    out.emplace_back("means", means);
  } else {
    out.emplace_back("setting", config.setting);
  }
  out.emplace_back("design", design_name(config.design));
  if (const auto* ts = std::get_if<ThompsonFloorParams>(&config.design)) {
    out.emplace_back("floor_exponent", format_double(ts->floor_exponent));
    out.emplace_back("floor_scale", format_double(ts->floor_scale));
    out.emplace_back("num_draws", std::to_string(ts->num_draws));
    out.emplace_back("batch_size", std::to_string(ts->batch_size));
  }
  out.emplace_back("horizon", std::to_string(config.horizon));
  std::string checkpoints;
  for (int c : config.resolved_checkpoints()) {
    checkpoints += (checkpoints.empty() ? "" : ",") + std::to_string(c);
  }
  out.emplace_back("checkpoints", checkpoints);
  std::string estimators;
  for (auto kind : config.estimators) {
    estimators += (estimators.empty() ? "" : ",") + std::string(estimator_name(kind));
  }
  out.emplace_back("estimators", estimators);
  std::string targets;
  for (const auto& t : config.targets) {
    targets += (targets.empty() ? "" : ",") + target_label(t);
  }
  out.emplace_back("targets", targets);
  out.emplace_back("reps", std::to_string(config.replications));
  out.emplace_back("seed", std::to_string(config.seed));
  out.emplace_back("level", format_double(config.level));
  out.emplace_back("two_point_alpha", format_double(config.two_point_alpha));
  out.emplace_back("threads", std::to_string(config.threads));
  return out;
}

std::string manifest_to_json(const RunManifest& manifest) {
  ordered_json j;
  j["command"] = manifest.command;
  ordered_json config = ordered_json::object();
  for (const auto& [k, v] : manifest.config) config[k] = v;
  j["config"] = config;
  j["seeds"] = {{"base_seed", manifest.base_seed},
                {"replications", manifest.replications},
                {"scheme", manifest.seed_scheme}};
  j["git_hash"] = build_git_hash();
  j["wall_seconds"] = manifest.wall_seconds;
  j["outputs"] = manifest.outputs;
  return j.dump(2);
}

void write_manifest(const RunManifest& manifest, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << manifest_to_json(manifest) << '\n';
}

std::string build_git_hash() { return ADAPTCI_GIT_HASH; }

}  // namespace adaptci
