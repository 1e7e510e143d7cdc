#include "churnlab/churn.hpp"

#include "churnlab/error.hpp"

#include <fmt/format.h>

#include <cmath>

namespace churnlab {

namespace {

void require_lengths(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw ShapeError(fmt::format("{}: lengths {} and {} differ", what, a, b));
  if (a == 0) throw ShapeError(fmt::format("{}: empty prediction sequence", what));
}

}  // namespace

double churn(std::span<const int> preds_a, std::span<const int> preds_b) {
  require_lengths(preds_a.size(), preds_b.size(), "churn");
  std::size_t diff = 0;
  for (std::size_t i = 0; i < preds_a.size(); ++i) diff += preds_a[i] != preds_b[i];
  return static_cast<double>(diff) / static_cast<double>(preds_a.size());
}

double accuracy(std::span<const int> preds, std::span<const int> truth) {
  require_lengths(preds.size(), truth.size(), "accuracy");
  std::size_t hit = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) hit += preds[i] == truth[i];
  return static_cast<double>(hit) / static_cast<double>(preds.size());
}

SlicedChurn sliced_churn(std::span<const int> preds_a, std::span<const int> preds_b,
                         std::span<const int> truth) {
  require_lengths(preds_a.size(), preds_b.size(), "sliced_churn");
  require_lengths(preds_a.size(), truth.size(), "sliced_churn");
  std::size_t n_correct = 0, diff_correct = 0, n_wrong = 0, diff_wrong = 0;
  for (std::size_t i = 0; i < preds_a.size(); ++i) {
    const bool differs = preds_a[i] != preds_b[i];
    if (preds_a[i] == truth[i]) {
      ++n_correct;
      diff_correct += differs;
    } else {
      ++n_wrong;
      diff_wrong += differs;
    }
  }
  SlicedChurn out;
  if (n_correct > 0) out.correct = static_cast<double>(diff_correct) / static_cast<double>(n_correct);
  if (n_wrong > 0) out.incorrect = static_cast<double>(diff_wrong) / static_cast<double>(n_wrong);
  return out;
}

MeanStd mean_std(std::span<const double> values) {
  MeanStd out;
  if (values.empty()) return out;
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return out;
}

ChurnReport pairwise_stats(std::span<const std::vector<int>> run_predictions,
                           std::span<const int> truth) {
  if (run_predictions.size() < 2) {
    throw ParameterError("churn statistics need at least two runs");
  }
  std::vector<double> accs;
  for (const auto& run : run_predictions) accs.push_back(100.0 * accuracy(run, truth));

  std::vector<double> churns, correct, incorrect;
  for (std::size_t i = 0; i < run_predictions.size(); ++i) {
    for (std::size_t j = i + 1; j < run_predictions.size(); ++j) {
      churns.push_back(100.0 * churn(run_predictions[i], run_predictions[j]));
      const SlicedChurn s = sliced_churn(run_predictions[i], run_predictions[j], truth);
      if (s.correct) correct.push_back(100.0 * *s.correct);
      if (s.incorrect) incorrect.push_back(100.0 * *s.incorrect);
    }
  }
  ChurnReport report;
  report.n_runs = static_cast<int>(run_predictions.size());
  report.n_pairs = static_cast<int>(churns.size());
  report.accuracy = mean_std(accs);
  report.churn = mean_std(churns);
  if (!correct.empty()) report.churn_correct = mean_std(correct);
  if (!incorrect.empty()) report.churn_incorrect = mean_std(incorrect);
  return report;
}

ChurnReport pairwise_stats(std::span<const RunRecord> runs, std::span<const int> truth) {
  std::vector<std::vector<int>> preds;
  preds.reserve(runs.size());
  for (const auto& r : runs) preds.push_back(r.classes);
  return pairwise_stats(std::span<const std::vector<int>>(preds), truth);
}

std::vector<std::size_t> pareto_frontier(std::span<const std::pair<double, double>> points) {
  if (points.empty()) throw ParameterError("Pareto frontier of an empty set");
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto [acc_i, churn_i] = points[i];
    bool dominated = false;
    for (std::size_t j = 0; j < points.size() && !dominated; ++j) {
      const auto [acc_j, churn_j] = points[j];
      dominated = acc_j >= acc_i && churn_j <= churn_i && (acc_j > acc_i || churn_j < churn_i);
    }
    if (!dominated) kept.push_back(i);
  }
  return kept;
}

std::size_t select_best(std::span<const ChurnReport> reports) {
  if (reports.empty()) throw ParameterError("select_best over an empty list");
  double top = reports[0].accuracy.mean;
  for (const auto& r : reports) top = std::max(top, r.accuracy.mean);
  std::size_t best = reports.size();
  for (std::size_t i = 0; i < reports.size(); ++i) {
    if (top - reports[i].accuracy.mean >= kSelectionAccuracyWindow) continue;
    if (best == reports.size() || reports[i].churn.mean < reports[best].churn.mean) best = i;
  }
  return best;
}

}  // namespace churnlab
