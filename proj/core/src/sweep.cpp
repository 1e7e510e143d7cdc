#include "churnlab/sweep.hpp"

#include "churnlab/error.hpp"
#include "churnlab/random.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <fstream>

namespace churnlab {

std::uint64_t sweep_point_seed(std::uint64_t base_seed, const MethodSpec& method) {
  return base_seed + stable_hash(method.hyperparams());
}

std::vector<SweepPoint> run_sweep(const ExperimentConfig& config, const SweepGrid& grid,
                                  const std::optional<std::filesystem::path>& progress_path) {
  if (grid.size() == 0) throw ConfigError("sweep grid is empty");
  validate(config);
  // The split is shared by every point.
  const PreparedData data = prepare_data(config.dataset);

  std::ofstream progress;
  if (progress_path) {
    progress.open(*progress_path, std::ios::binary | std::ios::trunc);
    if (!progress) throw IoError(fmt::format("cannot write '{}'", progress_path->string()));
  }

  std::vector<SweepPoint> out;
  for (const auto& coordinates : grid.points()) {
    SweepPoint point;
    point.coordinates = coordinates;
    ExperimentConfig cfg = config;
    try {
      for (const auto& [key, value] : coordinates) cfg.method.set(key, value);
      cfg.base_seed = sweep_point_seed(config.base_seed, cfg.method);
      point.result = run_experiment(cfg, data);
    } catch (const std::exception& e) {
      point.error = e.what();
    }
    if (progress) {
      nlohmann::json line;
      line["method"] = to_string(cfg.method.method);
      line["hyperparams"] = cfg.method.hyperparams();
      if (point.result) {
        const ChurnReport& r = point.result->report;
        line["status"] = "ok";
        line["accuracy_mean"] = r.accuracy.mean;
        line["churn_mean"] = r.churn.mean;
      } else {
        line["status"] = "error";
        line["error"] = point.error;
      }
      progress << line.dump() << '\n' << std::flush;
    }
    out.push_back(std::move(point));
  }
  return out;
}

std::vector<ExperimentResult> completed(const std::vector<SweepPoint>& points) {
  std::vector<ExperimentResult> out;
  for (const SweepPoint& p : points) {
    if (p.result) out.push_back(*p.result);
  }
  return out;
}

std::optional<std::size_t> best_point(const std::vector<SweepPoint>& points) {
  std::vector<ChurnReport> reports;
  std::vector<std::size_t> index;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].result) {
      reports.push_back(points[i].result->report);
      index.push_back(i);
    }
  }
  if (reports.empty()) return std::nullopt;
  return index[select_best(reports)];
}

}  // namespace churnlab
