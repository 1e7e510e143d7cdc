#pragma once

#include "churnlab/experiment.hpp"

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace churnlab {

enum class ReportFormat { csv, table, jsonl };

ReportFormat parse_format(const std::string& name);

// "mean (std)" with two decimals, e.g. "88.98 (0.33)".
std::string format_mean_std(double mean, double std);

// Membership flags of pareto_frontier over (accuracy mean, churn mean).
std::vector<bool> pareto_flags(std::span<const ExperimentResult> results);

// Summary CSV: method, hyperparams, accuracy/churn/churn_correct/
// churn_incorrect mean and std (full precision, percentages), pareto_flag.
// Absent values are empty cells.
std::string render_summary_csv(std::span<const ExperimentResult> results);

// Human-readable table with "mean (std)" cells; absent values print "-".
std::string render_table(std::span<const ExperimentResult> results);

// One JSON object per run: method, hyperparams, run, seed, fingerprint,
// truth, classes, probs.
std::string render_runs_jsonl(std::span<const ExperimentResult> results);

// Groups JSON-lines run records back into results (by method and
// hyperparams, first-appearance order) and recomputes each ChurnReport.
std::vector<ExperimentResult> parse_runs_jsonl(const std::string& text);
std::vector<ExperimentResult> read_runs_jsonl(const std::filesystem::path& path);

// Writes summary.csv, report.txt and/or runs.jsonl under out_dir (all
// three when format is empty). Throws IoError if a file cannot be written.
void write_report(std::span<const ExperimentResult> results, const std::filesystem::path& out_dir,
                  std::optional<ReportFormat> format = {});

}  // namespace churnlab
