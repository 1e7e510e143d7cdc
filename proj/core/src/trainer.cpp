#include "churnlab/trainer.hpp"

#include "churnlab/baselines.hpp"
#include "churnlab/error.hpp"
#include "churnlab/random.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace churnlab {

void validate(const Batch& batch) {
  if (batch.features.rows() < 1) throw ShapeError("batch is empty");
  if (batch.targets.rows() != batch.features.rows()) {
    throw ShapeError(fmt::format("batch has {} feature rows but {} target rows",
                                 batch.features.rows(), batch.targets.rows()));
  }
  if (!batch.features.allFinite()) throw NumericError("batch features contain NaN or infinity");
  require_simplex_rows(batch.targets, "batch target");
}

double evaluate_loss(const MlpParams& params, const Batch& batch, const LossSpec& loss) {
  return loss_value(loss, forward_logits(params, batch.features), batch.targets);
}

MlpGradients compute_gradients(const MlpParams& params, const Batch& batch,
                               const LossSpec& loss, double* loss_out) {
  const ForwardTrace trace = forward_trace(params, batch.features);
  if (trace.logits.cols() != batch.targets.cols()) {
    throw ShapeError(fmt::format("network emits {} classes but targets have {}",
                                 trace.logits.cols(), batch.targets.cols()));
  }
  const LossAndGrad lg = loss_and_grad(loss, trace.logits, batch.targets);
  if (loss_out) *loss_out = lg.loss;
  return backward(params, trace, lg.logit_grad);
}

double train_step(MlpParams& params, AdamState& state, const Batch& batch, const LossSpec& loss) {
  validate(batch);
  double value = 0.0;
  const MlpGradients grads = compute_gradients(params, batch, loss, &value);
  if (!std::isfinite(value)) {
    throw NumericError(fmt::format("non-finite loss {} at step {} ({})", value,
                                   state.step_count + 1, describe(loss)));
  }
  for (std::size_t l = 0; l < grads.weights.size(); ++l) {
    if (!grads.weights[l].allFinite() || !grads.biases[l].allFinite()) {
      throw NumericError(fmt::format("non-finite gradient in layer {} at step {} ({})", l,
                                     state.step_count + 1, describe(loss)));
    }
  }
  adam_update(params, state, grads);
  return value;
}

void validate(const TrainConfig& config) {
  if (config.epochs < 1) throw ConfigError("epochs must be >= 1");
  if (config.batch_size < 1) throw ConfigError("batch_size must be >= 1");
  for (int h : config.hidden_sizes) {
    if (h < 1) throw ConfigError("hidden layer sizes must be positive");
  }
  if (!(config.adam.lr >= 0.0) || !std::isfinite(config.adam.lr)) {
    throw ConfigError("learning rate must be a finite non-negative number");
  }
  if (config.mixup_alpha && !(*config.mixup_alpha > 0.0)) {
    throw ParameterError("mixup a must be > 0");
  }
  validate(config.loss);
}

std::vector<std::size_t> epoch_order(std::size_t n, std::uint64_t seed, int epoch) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(mix_seed(mix_seed(seed, streams::kShuffle), static_cast<std::uint64_t>(epoch)));
  std::shuffle(order.begin(), order.end(), rng);
  return order;
}

Batch gather_batch(const Matrix& features, const Matrix& targets,
                   std::span<const std::size_t> rows) {
  Batch batch;
  batch.features.resize(static_cast<Eigen::Index>(rows.size()), features.cols());
  batch.targets.resize(static_cast<Eigen::Index>(rows.size()), targets.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(rows[i]);
    batch.features.row(static_cast<Eigen::Index>(i)) = features.row(r);
    batch.targets.row(static_cast<Eigen::Index>(i)) = targets.row(r);
  }
  return batch;
}

TrainedModel train(const Matrix& features, const Matrix& targets, const TrainConfig& config) {
  validate(config);
  if (features.rows() == 0) throw ConfigError("cannot train on an empty dataset");
  if (targets.rows() != features.rows()) throw ShapeError("features and targets differ in length");
  if (targets.cols() < 2) throw ShapeError("targets need at least two classes");

  std::vector<int> sizes;
  sizes.push_back(static_cast<int>(features.cols()));
  sizes.insert(sizes.end(), config.hidden_sizes.begin(), config.hidden_sizes.end());
  sizes.push_back(static_cast<int>(targets.cols()));

  TrainedModel model;
  model.seed = config.seed;
  model.params = init_mlp(sizes, mix_seed(config.seed, streams::kInit));
  AdamState state = AdamState::for_params(model.params, config.adam);
  Rng mixup_rng(mix_seed(config.seed, streams::kMixup));

  const auto n = static_cast<std::size_t>(features.rows());
  const auto bs = static_cast<std::size_t>(config.batch_size);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const std::vector<std::size_t> order = epoch_order(n, config.seed, epoch);
    for (std::size_t start = 0; start < n; start += bs) {
      const std::size_t end = std::min(n, start + bs);
      Batch batch = gather_batch(features, targets,
                                 std::span(order).subspan(start, end - start));
      if (config.mixup_alpha && batch.features.rows() >= 2) {
        batch = mixup_batch(batch, *config.mixup_alpha, mixup_rng);
      }
      try {
        train_step(model.params, state, batch, config.loss);
      } catch (const NumericError& e) {
        throw NumericError(fmt::format("epoch {}: {}", epoch, e.what()));
      }
    }
  }
  model.steps = state.step_count;
  return model;
}

TrainedModel train(const Dataset& data, const TrainConfig& config) {
  if (data.size() == 0) throw ConfigError("cannot train on an empty dataset");
  return train(data.features, data.labels, config);
}

Predictions predictions_from_probs(Matrix probs) {
  Predictions out;
  out.classes.resize(static_cast<std::size_t>(probs.rows()));
  for (Eigen::Index i = 0; i < probs.rows(); ++i) {
    out.classes[static_cast<std::size_t>(i)] = argmax(probs.row(i));
  }
  out.probs = std::move(probs);
  return out;
}

Predictions predict(const MlpParams& params, const Matrix& features) {
  return predictions_from_probs(softmax_rows(forward_logits(params, features)));
}

}  // namespace churnlab
