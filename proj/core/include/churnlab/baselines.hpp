#pragma once

#include "churnlab/random.hpp"
#include "churnlab/trainer.hpp"
#include "churnlab/types.hpp"

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace churnlab {

// --- anchor -----------------------------------------------------------------

// (1 - a) y + a * prelim. Throws ParameterError unless 0 <= a <= 1.
SoftLabel anchor_labels(const Eigen::Ref<const SoftLabel>& y,
                        const Eigen::Ref<const SoftLabel>& prelim_probs, double a);
Matrix anchor_label_rows(const Matrix& labels, const Matrix& prelim_probs, double a);

// --- mixup ------------------------------------------------------------------

// Row i of the result is lambdas[i] * row i + (1 - lambdas[i]) * row partners[i].
Batch mixup_batch(const Batch& batch, std::span<const double> lambdas,
                  std::span<const std::size_t> partners);

// Draws lambda ~ Beta(a, a) and a uniform partner (with replacement) per row.
// Throws ParameterError if a <= 0 or the batch has fewer than 2 rows.
Batch mixup_batch(const Batch& batch, double a, Rng& rng);

// --- co-distillation --------------------------------------------------------

enum class PsiType { cross_entropy, kl };

PsiType parse_psi(const std::string& name);
std::string to_string(PsiType psi);

// Psi(p1, p2): cross-entropy -sum p1 ln p2 or KL sum p1 ln(p1 / p2), with
// probabilities clamped at 1e-12 inside the logarithms. Batch mean.
double divergence(const Matrix& probs1, const Matrix& probs2, PsiType psi);

// CE(p1, y) + CE(p2, y) + gate * a * Psi(p1, p2), gate = 0 while step < n_warm.
double codistill_loss(const Matrix& probs1, const Matrix& probs2, const Matrix& targets,
                      double a, PsiType psi, std::int64_t step, std::int64_t n_warm);

struct CodistillSpec {
  double a = 0.5;
  PsiType psi = PsiType::cross_entropy;
  std::int64_t n_warm = 0;
};

void validate(const CodistillSpec& spec);

// Same objective evaluated from the two logit matrices, with gradients for
// both. Gradients flow into both predictions (no stop-gradient).
struct CodistillLossAndGrad {
  double loss = 0.0;
  double coupling = 0.0;  // gated a * Psi term
  Matrix grad1;
  Matrix grad2;
};

CodistillLossAndGrad codistill_loss_and_grad(const Matrix& logits1, const Matrix& logits2,
                                             const Matrix& targets, const CodistillSpec& spec,
                                             std::int64_t step);

// Gradients of the joint objective for both networks on one batch.
struct CodistillGradients {
  double loss = 0.0;
  MlpGradients first;
  MlpGradients second;
};

CodistillGradients codistill_gradients(const MlpParams& first, const MlpParams& second,
                                       const Batch& batch, const CodistillSpec& spec,
                                       std::int64_t step);

// Two networks trained in lockstep on shared minibatches; the first is
// initialized from the config seed, the second from a derived peer seed.
std::pair<TrainedModel, TrainedModel> train_codistill(const Matrix& features,
                                                      const Matrix& targets,
                                                      const TrainConfig& config,
                                                      const CodistillSpec& spec);

// --- ensemble ---------------------------------------------------------------

// Uniform average of the members' softmax rows, then argmax (low-index ties).
// The running mean makes m identical members reproduce a single member
// exactly. Throws ParameterError on an empty list.
Predictions ensemble_predict(std::span<const MlpParams> models, const Matrix& features);

}  // namespace churnlab
