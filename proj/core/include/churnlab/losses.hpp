#pragma once

#include "churnlab/types.hpp"

#include <string>
#include <variant>

namespace churnlab {

// Floor applied inside every logarithm of a probability.
inline constexpr double kLogClamp = 1e-12;

// Row-wise softmax with max-subtraction. Throws NumericError on NaN/Inf.
Matrix softmax_rows(const Matrix& logits);

// Row-wise log-softmax (log-sum-exp form).
Matrix log_softmax_rows(const Matrix& logits);

// Mean over rows of -sum_j target_j * ln(max(prob_j, 1e-12)).
// Throws ShapeError if the shapes differ.
double soft_cross_entropy(const Matrix& probs, const Matrix& targets);
double soft_cross_entropy_single(const Eigen::Ref<const Vector>& probs,
                                 const Eigen::Ref<const Vector>& target);

// Plain soft-target cross-entropy on softmax(logits). Covers the control,
// global and k-NN label smoothing, anchor and mixup targets.
struct CrossEntropyLoss {};

// Cross-entropy plus a * ||logits||_p per example, p in {1, 2}.
struct LpRegLoss {
  double a = 0.0;
  int p = 2;
};

// Two-temperature tempered logistic loss; t1 in (0, 1], t2 >= 1.
struct BiTemperedLoss {
  double t1 = 1.0;
  double t2 = 1.0;
  int n_iters = 5;
};

using LossSpec = std::variant<CrossEntropyLoss, LpRegLoss, BiTemperedLoss>;

// Throws ParameterError for out-of-range hyperparameters.
void validate(const LossSpec& spec);
std::string describe(const LossSpec& spec);

// Batch-mean loss and its gradient with respect to the logits.
struct LossAndGrad {
  double loss = 0.0;
  Matrix logit_grad;
};

LossAndGrad loss_and_grad(const LossSpec& spec, const Matrix& logits, const Matrix& targets);
double loss_value(const LossSpec& spec, const Matrix& logits, const Matrix& targets);

// Cross-entropy of softmax(logits) plus a * mean_i ||logits_i||_p.
// Throws ParameterError unless p is 1 or 2 and a >= 0.
double lp_reg_loss(const Matrix& logits, const Matrix& targets, double a, int p);

}  // namespace churnlab
