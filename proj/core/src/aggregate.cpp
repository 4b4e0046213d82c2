#include "adaptci/aggregate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "adaptci/normal.hpp"

namespace adaptci {

int StudentizedHistogram::bin_of(double z) {
  if (std::isnan(z)) return 0;
  if (z < kLo) return 0;
  if (z >= kHi) return kInnerBins + 1;
  const double width = (kHi - kLo) / kInnerBins;
  const int i = static_cast<int>(std::floor((z - kLo) / width));
  return 1 + std::clamp(i, 0, kInnerBins - 1);
}

double StudentizedHistogram::lower_edge(int i) {
  if (i == 0) return -std::numeric_limits<double>::infinity();
  return kLo + (i - 1) * (kHi - kLo) / kInnerBins;
}

long StudentizedHistogram::total() const {
  return std::accumulate(counts.begin(), counts.end(), 0L);
}

double ks_distance_normal(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  double d = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double f = normal_cdf(values[i]);
    d = std::max(d, std::max((i + 1) / n - f, f - i / n));
  }
  return d;
}

double aggregate_studentized(const EstimateReport& report, double truth) {
  const double err = report.point - truth;
  if (report.variance > 0.0) return err / std::sqrt(report.variance);
  if (err == 0.0) return 0.0;
  return err > 0.0 ? std::numeric_limits<double>::infinity()
                   : -std::numeric_limits<double>::infinity();
}

CellAccumulator::CellAccumulator(std::string estimator, std::string target,
                                 int horizon, double truth)
    : estimator_(std::move(estimator)),
      target_(std::move(target)),
      horizon_(horizon),
      truth_(truth) {}

void CellAccumulator::add(const EstimatorOutcome& outcome) {
  add(outcome.report, outcome.diagnostics);
}

void CellAccumulator::add(const std::optional<EstimateReport>& report,
                          const EstimateDiagnostics& diagnostics) {
  ++total_;
  if (!report) return;
  ++defined_;
  const double err = report->point - truth_;
  const double err2 = err * err;
  sum_err_ += err;
  sum_err2_ += err2;
  sum_err4_ += err2 * err2;
  errors_.push_back(err);
  covered_ += report->covers(truth_) ? 1 : 0;
  const double width = report->ci_width();
  sum_width_ += width;
  sum_width2_ += width * width;
  const double z = aggregate_studentized(*report, truth_);
  histogram_.add(z);
  studentized_.push_back(z);
  if (diagnostics.effective_sample_size) {
    sum_ess_ += *diagnostics.effective_sample_size;
    ++n_ess_;
  }
  if (diagnostics.lyapunov_ratio) {
    sum_lyap_ += *diagnostics.lyapunov_ratio;
    ++n_lyap_;
  }
  if (diagnostics.variance_ratio) {
    sum_vr_ += *diagnostics.variance_ratio;
    ++n_vr_;
  }
}

void CellAccumulator::merge(const CellAccumulator& other) {
  total_ += other.total_;
  defined_ += other.defined_;
  sum_err_ += other.sum_err_;
  sum_err2_ += other.sum_err2_;
  sum_err4_ += other.sum_err4_;
  errors_.insert(errors_.end(), other.errors_.begin(), other.errors_.end());
  covered_ += other.covered_;
  sum_width_ += other.sum_width_;
  sum_width2_ += other.sum_width2_;
  for (std::size_t i = 0; i < histogram_.counts.size(); ++i) {
    histogram_.counts[i] += other.histogram_.counts[i];
  }
  studentized_.insert(studentized_.end(), other.studentized_.begin(),
                      other.studentized_.end());
  sum_ess_ += other.sum_ess_;
  n_ess_ += other.n_ess_;
  sum_lyap_ += other.sum_lyap_;
  n_lyap_ += other.n_lyap_;
  sum_vr_ += other.sum_vr_;
  n_vr_ += other.n_vr_;
}

AggregateStats CellAccumulator::finalize() const {
  AggregateStats s;
  s.estimator = estimator_;
  s.target = target_;
  s.horizon = horizon_;
  s.truth = truth_;
  s.replications = total_;
  s.defined = defined_;
  s.histogram = histogram_;
  if (defined_ == 0) return s;

  const double n = static_cast<double>(defined_);
  const double mean_err = sum_err_ / n;
  const double mse = sum_err2_ / n;
  const double var_err = std::max(mse - mean_err * mean_err, 0.0);
  s.bias = mean_err;
  s.mean_point = truth_ + mean_err;
  s.sd = std::sqrt(var_err * n / std::max(n - 1.0, 1.0));
  s.bias_se = s.sd / std::sqrt(n);
  s.rmse = std::sqrt(mse);
  const double var_err2 = std::max(sum_err4_ / n - mse * mse, 0.0);
  s.rmse_se = s.rmse > 0.0 ? std::sqrt(var_err2 / n) / (2.0 * s.rmse) : 0.0;

  // Central moments about the sample mean, from the stored errors.
  double m2 = 0.0;
  double m4 = 0.0;
  for (double e : errors_) {
    const double d = (e - mean_err) * (e - mean_err);
    m2 += d;
    m4 += d * d;
  }
  m2 /= n;
  m4 /= n;
  s.excess_kurtosis = m2 > 0.0 ? m4 / (m2 * m2) - 3.0 : 0.0;

  s.coverage = static_cast<double>(covered_) / n;
  s.coverage_se = std::sqrt(s.coverage * (1.0 - s.coverage) / n);
  s.mean_width = sum_width_ / n;
  const double var_w = std::max(sum_width2_ / n - s.mean_width * s.mean_width, 0.0);
  s.width_se = std::sqrt(var_w / n);
  s.ks_distance = ks_distance_normal(studentized_);

  if (n_ess_ > 0) s.mean_effective_sample_size = sum_ess_ / static_cast<double>(n_ess_);
  if (n_lyap_ > 0) s.mean_lyapunov_ratio = sum_lyap_ / static_cast<double>(n_lyap_);
  if (n_vr_ > 0) s.mean_variance_ratio = sum_vr_ / static_cast<double>(n_vr_);
  return s;
}

}  // namespace adaptci
