#pragma once

#include "churnlab/types.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace churnlab {

// Test-set predictions of one training run.
struct RunRecord {
  int run_index = 0;
  std::uint64_t seed = 0;
  std::string fingerprint;   // identifies method + hyperparameters + config
  std::vector<int> classes;  // predicted class per test example
  Matrix probs;              // predicted probability rows
};

// Fraction of positions where the two prediction sequences differ.
// Throws ShapeError on a length mismatch or empty input.
double churn(std::span<const int> preds_a, std::span<const int> preds_b);

double accuracy(std::span<const int> preds, std::span<const int> truth);

// Churn restricted to the examples run A got right / wrong. An empty slice
// is reported as nullopt.
struct SlicedChurn {
  std::optional<double> correct;
  std::optional<double> incorrect;
};

SlicedChurn sliced_churn(std::span<const int> preds_a, std::span<const int> preds_b,
                         std::span<const int> truth);

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

// Summary of a method/hyperparameter setting. Every value is a percentage.
// std is the sample standard deviation across runs (accuracy) or pairs
// (churn metrics), not the standard error.
struct ChurnReport {
  MeanStd accuracy;
  MeanStd churn;
  std::optional<MeanStd> churn_correct;
  std::optional<MeanStd> churn_incorrect;
  int n_runs = 0;
  int n_pairs = 0;
};

// Averages over all unordered pairs (i < j); run i is "first" for slicing.
// Throws ParameterError for fewer than two runs.
ChurnReport pairwise_stats(std::span<const std::vector<int>> run_predictions,
                           std::span<const int> truth);
ChurnReport pairwise_stats(std::span<const RunRecord> runs, std::span<const int> truth);

// Sample standard deviation (n - 1 denominator); 0 for fewer than two values.
MeanStd mean_std(std::span<const double> values);

// Indices (ascending) of the points not dominated under
// (maximize accuracy, minimize churn). Throws ParameterError if empty.
std::vector<std::size_t> pareto_frontier(std::span<const std::pair<double, double>> points);

// Accuracy gap, in percentage points, under which two settings count as tied.
inline constexpr double kSelectionAccuracyWindow = 0.1;

// Highest-accuracy setting, or the lowest-churn one among settings within
// 0.1 percentage points of the top accuracy; ties keep list order.
// Throws ParameterError if empty.
std::size_t select_best(std::span<const ChurnReport> reports);

}  // namespace churnlab
