#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "adaptci/evaluate.hpp"

namespace adaptci {

/// Fixed studentized-statistic histogram: 50 bins of width 0.2 on [-5, 5]
/// plus an underflow bin (index 0) and an overflow bin (index 51).
struct StudentizedHistogram {
  static constexpr int kInnerBins = 50;
  static constexpr double kLo = -5.0;
  static constexpr double kHi = 5.0;
  std::array<long, kInnerBins + 2> counts{};

  static int bin_of(double z);
  /// Left edge of bin i (underflow: -inf).
  static double lower_edge(int i);
  void add(double z) { ++counts[static_cast<std::size_t>(bin_of(z))]; }
  long total() const;
};

/// Kolmogorov-Smirnov distance between the empirical CDF of `values` and
/// the standard normal CDF. Sorts a copy.
double ks_distance_normal(std::vector<double> values);

/// Summary of one (estimator, target, horizon) cell across replications.
/// Each mean carries its Monte Carlo standard error.
struct AggregateStats {
  std::string estimator;
  std::string target;
  int horizon = 0;
  double truth = 0.0;

  long replications = 0;
  long defined = 0;

  double mean_point = 0.0;
  double bias = 0.0;
  double bias_se = 0.0;
  double rmse = 0.0;
  double rmse_se = 0.0;
  double sd = 0.0;
  double excess_kurtosis = 0.0;
  double coverage = 0.0;
  double coverage_se = 0.0;
  double mean_width = 0.0;
  double width_se = 0.0;

  StudentizedHistogram histogram;
  double ks_distance = 0.0;

  std::optional<double> mean_effective_sample_size;
  std::optional<double> mean_lyapunov_ratio;
  std::optional<double> mean_variance_ratio;
};

/// Mergeable accumulator for one cell. Merging two accumulators and then
/// finalizing equals accumulating the union (up to summation order).
class CellAccumulator {
 public:
  CellAccumulator() = default;
  CellAccumulator(std::string estimator, std::string target, int horizon,
                  double truth);

  void add(const EstimatorOutcome& outcome);
  void add(const std::optional<EstimateReport>& report,
           const EstimateDiagnostics& diagnostics = {});
  void merge(const CellAccumulator& other);

  AggregateStats finalize() const;

  long replications() const { return total_; }
  long defined() const { return defined_; }
  const std::vector<double>& studentized() const { return studentized_; }
  /// (point - truth) for every defined replication, in insertion order.
  const std::vector<double>& errors() const { return errors_; }

 private:
  std::string estimator_;
  std::string target_;
  int horizon_ = 0;
  double truth_ = 0.0;

  long total_ = 0;
  long defined_ = 0;
  double sum_err_ = 0.0;
  double sum_err2_ = 0.0;
  double sum_err4_ = 0.0;
  long covered_ = 0;
  double sum_width_ = 0.0;
  double sum_width2_ = 0.0;
  StudentizedHistogram histogram_;
  std::vector<double> studentized_;
  std::vector<double> errors_;

  double sum_ess_ = 0.0;
  long n_ess_ = 0;
  double sum_lyap_ = 0.0;
  long n_lyap_ = 0;
  double sum_vr_ = 0.0;
  long n_vr_ = 0;
};

/// Studentized value used by the aggregates: (point - truth)/se, with
/// zero-variance reports mapped to 0 when exact and to -/+inf otherwise.
double aggregate_studentized(const EstimateReport& report, double truth);

}  // namespace adaptci
