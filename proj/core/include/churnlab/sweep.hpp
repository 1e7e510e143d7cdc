#pragma once

#include "churnlab/config.hpp"
#include "churnlab/experiment.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace churnlab {

struct SweepPoint {
  std::vector<std::pair<std::string, double>> coordinates;
  std::optional<ExperimentResult> result;
  std::string error;  // set when the point failed
};

// Seed offset of a grid point: base_seed + stable_hash(hyperparams).
std::uint64_t sweep_point_seed(std::uint64_t base_seed, const MethodSpec& method);

// One run_experiment per grid point, in grid order. Failures are recorded
// and the sweep continues. When `progress_path` is given, one JSON line per
// finished point is appended as soon as the point completes.
std::vector<SweepPoint> run_sweep(const ExperimentConfig& config, const SweepGrid& grid,
                                  const std::optional<std::filesystem::path>& progress_path = {});

// Successful points, in grid order.
std::vector<ExperimentResult> completed(const std::vector<SweepPoint>& points);

// Index into `points` of the setting chosen by select_best among completed points.
std::optional<std::size_t> best_point(const std::vector<SweepPoint>& points);

}  // namespace churnlab
