#pragma once

#include "churnlab/adam.hpp"
#include "churnlab/dataset.hpp"
#include "churnlab/losses.hpp"
#include "churnlab/mlp.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace churnlab {

// A minibatch: m rows of features with one soft target per row.
struct Batch {
  Matrix features;
  Matrix targets;
};

// Throws ShapeError / ParameterError unless m >= 1, shapes agree and
// every target row lies on the simplex.
void validate(const Batch& batch);

// Loss of `params` on `batch` without touching any state.
double evaluate_loss(const MlpParams& params, const Batch& batch, const LossSpec& loss);

// Reverse-mode gradient of the batch loss. Writes the loss value to
// *loss_out when non-null.
MlpGradients compute_gradients(const MlpParams& params, const Batch& batch,
                               const LossSpec& loss, double* loss_out = nullptr);

// One gradient evaluation plus one Adam update. Returns the pre-update loss.
// Throws NumericError (leaving params and state untouched) if the loss or
// any gradient entry is not finite.
double train_step(MlpParams& params, AdamState& state, const Batch& batch, const LossSpec& loss);

struct TrainConfig {
  std::vector<int> hidden_sizes{256, 256};
  int epochs = 20;
  int batch_size = 128;
  AdamConfig adam;
  std::uint64_t seed = 0;
  LossSpec loss = CrossEntropyLoss{};
  // When set, every minibatch is replaced by a mixup batch with Beta(a, a) weights.
  std::optional<double> mixup_alpha;
};

void validate(const TrainConfig& config);

struct TrainedModel {
  MlpParams params;
  std::uint64_t seed = 0;
  std::int64_t steps = 0;
};

// Seeded permutation of [0, n) used as the minibatch order of one epoch.
std::vector<std::size_t> epoch_order(std::size_t n, std::uint64_t seed, int epoch);

// Copies the given rows into a Batch.
Batch gather_batch(const Matrix& features, const Matrix& targets,
                   std::span<const std::size_t> rows);

// Minibatch Adam training from a Glorot initialization. Deterministic in
// (data, config): init uses mix_seed(seed, kInit), epoch e shuffles with a
// stream derived from (seed, e). Throws ConfigError on empty data.
TrainedModel train(const Matrix& features, const Matrix& targets, const TrainConfig& config);
TrainedModel train(const Dataset& data, const TrainConfig& config);

struct Predictions {
  std::vector<int> classes;
  Matrix probs;
};

// Softmax probabilities and argmax classes (ties to the lowest index).
Predictions predict(const MlpParams& params, const Matrix& features);
Predictions predictions_from_probs(Matrix probs);

}  // namespace churnlab
