#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "adaptci/aggregate.hpp"
#include "adaptci/estimators.hpp"
#include "adaptci/replication.hpp"

namespace adaptci {

/// JSON object with keys estimator, target, horizon, point, variance,
/// stderr, ci_lo, ci_hi, level and, when present, studentized and truth.
std::string report_to_json(const EstimateReport& report, int indent = 2);

/// Tidy aggregate table, one row per cell. `prefix` columns (name, value)
/// are prepended to every row, e.g. {"setting", "low_signal"}.
using CsvColumns = std::vector<std::pair<std::string, std::string>>;

void write_stats_csv_header(std::ostream& out, const CsvColumns& prefix = {});
void write_stats_csv_rows(std::ostream& out, const std::vector<AggregateStats>& stats,
                          const CsvColumns& prefix = {});

/// One row per (cell, histogram bin): bin, lower, upper, count.
void write_histogram_csv_header(std::ostream& out, const CsvColumns& prefix = {});
void write_histogram_csv_rows(std::ostream& out,
                              const std::vector<AggregateStats>& stats,
                              const CsvColumns& prefix = {});

/// Flat key/value rendering of a simulation config, in a stable order.
std::vector<std::pair<std::string, std::string>> config_entries(
    const SimulationConfig& config);

struct RunManifest {
  std::string command;
  std::vector<std::pair<std::string, std::string>> config;
  std::uint64_t base_seed = 0;
  long replications = 0;
  /// Seed scheme description, e.g. "splitmix64(base, index)".
  std::string seed_scheme;
  std::vector<std::string> outputs;
  double wall_seconds = 0.0;
};

std::string manifest_to_json(const RunManifest& manifest);
void write_manifest(const RunManifest& manifest, const std::string& path);

/// Revision the library was built from, or "unknown".
std::string build_git_hash();

/// Shortest round-trip decimal for CSV/JSON cells.
std::string format_double(double value);

}  // namespace adaptci
