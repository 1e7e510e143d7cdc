// churnlab: run churn experiments, grid sweeps and the k-NN rate studies.
//
// Exit codes: 0 ok, 1 unexpected failure, 2 configuration, 3 parameter,
// 4 shape, 5 numeric, 6 I/O, 7 parse, 8 every sweep point failed,
// 64 bad command line.

#include "churnlab/config.hpp"
#include "churnlab/error.hpp"
#include "churnlab/experiment.hpp"
#include "churnlab/report.hpp"
#include "churnlab/sweep.hpp"
#include "churnlab/theory.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

namespace {

using namespace churnlab;

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "churnlab-out";
  std::optional<int> workers;
  std::string format;
  std::string input;
};

ConfigFile load(const Options& opt) {
  ConfigFile file = load_config(opt.config_path);
  if (opt.seed) {
    file.experiment.base_seed = *opt.seed;
    file.theory.seed = *opt.seed;
  }
  if (opt.workers) {
    if (*opt.workers < 1) throw ConfigError("--workers must be >= 1");
    file.experiment.workers = *opt.workers;
  }
  return file;
}

std::optional<ReportFormat> format_of(const Options& opt) {
  if (opt.format.empty()) return std::nullopt;
  return parse_format(opt.format);
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << text)) throw IoError(fmt::format("cannot write '{}'", path.string()));
}

int cmd_run(const Options& opt) {
  const ConfigFile file = load(opt);
  const ExperimentResult result = run_experiment(file.experiment);
  std::span<const ExperimentResult> results(&result, 1);
  write_report(results, opt.out_dir, format_of(opt));
  std::cout << render_table(results);
  return 0;
}

int cmd_sweep(const Options& opt) {
  const ConfigFile file = load(opt);
  const SweepGrid grid = file.sweep ? *file.sweep : SweepGrid::defaults_for(file.experiment.method.method);
  std::filesystem::create_directories(opt.out_dir);
  const auto points = run_sweep(file.experiment, grid, std::filesystem::path(opt.out_dir) / "progress.jsonl");
  for (const SweepPoint& p : points) {
    if (p.result) continue;
    std::string where;
    for (const auto& [key, value] : p.coordinates) where += fmt::format(" {}={}", key, value);
    std::cerr << fmt::format("point{} failed: {}\n", where, p.error);
  }
  const auto results = completed(points);
  if (results.empty()) {
    std::cerr << "churnlab: every sweep point failed\n";
    return 8;
  }
  write_report(results, opt.out_dir, format_of(opt));
  std::cout << render_table(results);
  const std::size_t best = *best_point(points);
  std::cout << fmt::format("selected: {} {}\n", points[best].result->method,
                           points[best].result->hyperparams);
  return 0;
}

int cmd_theory(const Options& opt) {
  const ConfigFile file = load(opt);
  const TheoryConfig& th = file.theory;
  if (th.mode == "bounds") {
    const Theorem1Bound b1 = theorem1_bound(th.k, static_cast<double>(th.n), th.dim, th.constants, th.delta);
    std::cout << fmt::format("theorem1_bound n={} k={} D={} delta={}: {} (bias {}, variance {})\n",
                             th.n, th.k, th.dim, th.delta, b1.value, b1.bias_term, b1.variance_term);
    std::cout << fmt::format("admissible k range: [{}, {}] -> {}\n", b1.k_min, b1.k_max,
                             b1.k_admissible ? "inside" : "outside");
    std::cout << fmt::format("theorem2_bound n={} D={} beta={} delta={}: {}\n", th.n, th.dim,
                             th.beta, th.delta, theorem2_bound(static_cast<double>(th.n), th.dim, th.beta, th.delta));
    return 0;
  }
  const SyntheticProblem problem = SyntheticProblem::uniform_cube(th.dim, th.eta);
  const int workers = file.experiment.workers;
  if (th.mode == "coverage") {
    const CoverageResult c = bound_coverage(problem, th.n, th.k, th.constants, th.delta,
                                            th.trials, th.seed, workers);
    std::string text = "trial,sup_error,bound,covered\n";
    for (std::size_t t = 0; t < c.errors.size(); ++t) {
      text += fmt::format("{},{},{},{}\n", t, c.errors[t], c.bound, c.errors[t] <= c.bound);
    }
    write_file(std::filesystem::path(opt.out_dir) / "coverage.csv", text);
    std::cout << fmt::format("covered {}/{} trials (bound {}, k {} admissible range)\n",
                             c.covered, c.errors.size(), c.bound,
                             c.k_admissible ? "inside" : "outside");
    return 0;
  }
  RateOptions options;
  options.target = th.target.value_or(th.schedule.kind == KSchedule::Kind::linear
                                          ? RateTarget::beta_smoothed
                                          : RateTarget::eta);
  options.grid_per_axis = th.grid_per_axis;
  options.delta = th.delta;
  options.oracle_samples = th.oracle_samples;
  options.workers = workers;
  const RateResult rate = rate_experiment(problem, th.schedule, th.n_grid, th.trials, th.seed, options);
  const std::string csv = rate_csv(rate);
  write_file(std::filesystem::path(opt.out_dir) / "rate.csv", csv);
  if (opt.format == "table") {
    std::cout << fmt::format("{:>8}  {:>8}  {:>12}  {:>12}  {:>12}\n", "n", "k", "mean_error",
                             "std_error", "bound");
    for (std::size_t i = 0; i < rate.sample_sizes.size(); ++i) {
      std::cout << fmt::format("{:>8}  {:>8}  {:>12.6f}  {:>12.6f}  {:>12.6f}\n",
                               rate.sample_sizes[i], rate.ks[i], rate.mean_errors[i],
                               rate.std_errors[i], rate.bounds[i]);
    }
  } else {
    std::cout << csv;
  }
  std::cout << fmt::format("slope {:.4f} ({}, {} trials)\n", rate.slope, th.schedule.describe(),
                           rate.trials);
  return 0;
}

int cmd_report(const Options& opt) {
  const auto results = read_runs_jsonl(opt.input);
  write_report(results, opt.out_dir, format_of(opt));
  std::cout << render_table(results);
  return 0;
}

int guarded(int (*command)(const Options&), const Options& opt) {
  try {
    return command(opt);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const ParameterError& e) {
    std::cerr << "parameter error: " << e.what() << '\n';
    return 3;
  } catch (const ShapeError& e) {
    std::cerr << "shape error: " << e.what() << '\n';
    return 4;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return 5;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return 6;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 7;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return 6;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Prediction-churn experiments with k-NN label smoothing"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* config = sub->add_option("--config", opt.config_path, "INI experiment file");
    if (needs_config) config->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", opt.seed, "override the base seed");
    sub->add_option("--out", opt.out_dir, "output directory")->capture_default_str();
    sub->add_option("--workers", opt.workers, "parallel runs / trials");
    sub->add_option("--format", opt.format, "csv, table or jsonl (default: all report files)")
        ->check(CLI::IsMember({"csv", "table", "jsonl"}));
  };

  auto* run = app.add_subcommand("run", "train n_runs models of one method and report churn");
  add_common(run, true);
  auto* sweep = app.add_subcommand("sweep", "run every point of the [sweep] grid");
  add_common(sweep, true);
  auto* theory = app.add_subcommand("theory", "k-NN label rate experiments and bound evaluation");
  add_common(theory, true);
  auto* report = app.add_subcommand("report", "re-render reports from a runs.jsonl file");
  add_common(report, false);
  report->add_option("input", opt.input, "runs.jsonl written by run or sweep")
      ->required()
      ->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 64;
  }

  if (run->parsed()) return guarded(cmd_run, opt);
  if (sweep->parsed()) return guarded(cmd_sweep, opt);
  if (theory->parsed()) return guarded(cmd_theory, opt);
  return guarded(cmd_report, opt);
}
