#pragma once

#include "churnlab/baselines.hpp"
#include "churnlab/theory.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace churnlab {

enum class Method {
  control,
  label_smoothing,
  knn_ls,
  anchor,
  lp_reg,
  codistill,
  bitempered,
  mixup,
  ensemble,
};

Method parse_method(const std::string& name);
std::string to_string(Method method);

// A training method and the hyperparameters it uses. Fields that do not
// apply to `method` are ignored (and omitted from hyperparams()).
struct MethodSpec {
  Method method = Method::control;
  double a = 0.0;                     // label_smoothing, knn_ls, anchor, lp_reg, codistill, mixup
  double b = 0.0;                     // knn_ls
  int k = 10;                         // knn_ls
  int p = 2;                          // lp_reg
  double t1 = 1.0;                    // bitempered
  double t2 = 1.0;                    // bitempered
  int n_iters = 5;                    // bitempered
  std::int64_t n_warm = 0;            // codistill
  PsiType psi = PsiType::cross_entropy;  // codistill
  int m = 5;                          // ensemble
  std::uint64_t prelim_seed = 0;      // anchor: seed of the shared preliminary model
  // knn_ls: fixed seed of the first-phase model, shared by every run. When
  // unset, each run derives its own from the run seed.
  std::optional<std::uint64_t> phase_one_seed;

  // Canonical "key=value" list of the relevant hyperparameters, e.g. "a=1,b=0.5,k=10".
  std::string hyperparams() const;

  // Sets a hyperparameter by name. Throws ConfigError for an unknown key.
  void set(const std::string& key, double value);
};

void validate(const MethodSpec& spec);

struct DatasetSpec {
  std::string source = "two_gaussians";  // two_gaussians | smooth | csv
  std::size_t n = 3000;
  double flip_fraction = 0.1;
  std::string eta = "sine";              // smooth source
  int dim = 2;                           // smooth source
  std::uint64_t seed = 1;
  std::string path;                      // csv source
  std::string label_column = "label";
  bool has_header = true;
  double test_fraction = 1.0 / 3.0;
  std::uint64_t split_seed = 2;
};

struct ExperimentConfig {
  std::string name = "experiment";
  DatasetSpec dataset;
  std::vector<int> hidden{256, 256};
  int epochs = 20;
  int batch_size = 128;
  double learning_rate = 1e-3;
  MethodSpec method;
  int n_runs = 5;
  std::uint64_t base_seed = 0;
  int workers = 1;

  // Stable identifier of everything except base_seed and workers.
  std::string fingerprint() const;
};

void validate(const ExperimentConfig& config);

// Hyperparameter axes in declaration order; points() enumerates the
// Cartesian product with the first axis varying slowest.
struct SweepGrid {
  std::vector<std::pair<std::string, std::vector<double>>> axes;

  std::size_t size() const;
  std::vector<std::vector<std::pair<std::string, double>>> points() const;

  // The search ranges used for each method's hyperparameter tuning.
  static SweepGrid defaults_for(Method method);
};

struct TheoryConfig {
  std::string mode = "rate";  // rate | coverage | bounds
  EtaSpec eta;
  int dim = 1;
  KSchedule schedule;
  std::optional<RateTarget> target;
  std::vector<std::size_t> n_grid{1000, 4000, 16000, 64000};
  int trials = 5;
  int grid_per_axis = 0;
  double delta = 0.05;
  std::size_t oracle_samples = 1000000;
  std::uint64_t seed = 0;
  // coverage / bounds
  std::size_t n = 100000;
  int k = 20000;
  Theorem1Constants constants;
  double beta = 0.1;
};

struct ConfigFile {
  ExperimentConfig experiment;
  std::optional<SweepGrid> sweep;
  TheoryConfig theory;
};

// INI-style text: [section] headers and key = value lines; '#' and ';'
// start comments. Sections: experiment, dataset, model, method, sweep,
// theory. Unknown keys are rejected with ConfigError; the experiment is
// validated, so out-of-range values throw ParameterError.
ConfigFile parse_config(const std::string& text);
ConfigFile load_config(const std::filesystem::path& path);

}  // namespace churnlab
