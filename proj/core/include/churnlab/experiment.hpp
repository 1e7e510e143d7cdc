#pragma once

#include "churnlab/churn.hpp"
#include "churnlab/config.hpp"
#include "churnlab/dataset.hpp"
#include "churnlab/trainer.hpp"

#include <optional>
#include <string>
#include <vector>

namespace churnlab {

struct PreparedData {
  Dataset train;
  Dataset test;
};

// Builds the dataset described by `spec` and applies its fixed split.
PreparedData prepare_data(const DatasetSpec& spec);

// Everything produced by repeated runs of one method/hyperparameter setting.
struct ExperimentResult {
  std::string method;
  std::string hyperparams;
  std::vector<int> truth;  // test labels
  std::vector<RunRecord> runs;
  ChurnReport report;
};

TrainConfig make_train_config(const ExperimentConfig& config, std::uint64_t seed);

// Preliminary model shared by every anchor run of an experiment.
TrainedModel train_anchor_model(const ExperimentConfig& config, const PreparedData& data);

// Trains one run of the configured method with the given run seed and
// returns its test predictions. `anchor_model` must be set for anchor.
RunRecord run_once(const ExperimentConfig& config, const PreparedData& data, int run_index,
                   std::uint64_t seed, const TrainedModel* anchor_model = nullptr);

// n_runs runs with seeds base_seed + r on one fixed split, then pairwise
// churn statistics. Training failures are rethrown with the run index.
ExperimentResult run_experiment(const ExperimentConfig& config, const PreparedData& data);
ExperimentResult run_experiment(const ExperimentConfig& config);

}  // namespace churnlab
