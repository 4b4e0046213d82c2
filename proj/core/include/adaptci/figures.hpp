#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace adaptci {

enum class FigureId {
  kFig1Intro,
  kFig2ContrastEvolution,
  kFig3Histograms,
  kFig4ArmValues,
  kAppxLambdaPath,
};

enum class FigureScale { kDesk, kPaper };

/// Throws std::invalid_argument for unknown ids / scales.
FigureId parse_figure_id(std::string_view name);
std::string_view figure_id_name(FigureId id);
const std::vector<FigureId>& all_figure_ids();
FigureScale parse_figure_scale(std::string_view name);

struct FigureSize {
  int horizon = 0;
  long replications = 0;
};

/// Documented (T, R) per figure and scale.
FigureSize figure_size(FigureId id, FigureScale scale);

/// 1-2-5 grid of prefix lengths from 100 up to and including `horizon`.
std::vector<int> evolution_checkpoints(int horizon);

struct FigureOptions {
  FigureScale scale = FigureScale::kDesk;
  std::string out_dir = ".";
  std::uint64_t seed = 1;
  int threads = 1;
  /// Overrides of the documented size, mainly for smoke runs.
  std::optional<int> horizon;
  std::optional<long> replications;
  /// Thompson posterior draws per step; 0 is the exact limit.
  int num_draws = 0;
};

struct FigureOutput {
  std::vector<std::string> files;
  double wall_seconds = 0.0;
};

/// Writes the tidy CSV file(s) for one figure plus "<id>_manifest.json"
/// into options.out_dir (created if missing).
FigureOutput replicate_figure(FigureId id, const FigureOptions& options);

}  // namespace adaptci
