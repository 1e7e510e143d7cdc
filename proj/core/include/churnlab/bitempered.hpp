#pragma once

#include "churnlab/types.hpp"

namespace churnlab {

// Tempered logarithm (x^(1-t) - 1) / (1 - t); ln(x) at t = 1.
double log_t(double x, double t);

// Tempered exponential [1 + (1-t) x]_+^(1/(1-t)); exp(x) at t = 1.
double exp_t(double x, double t);

// Tempered softmax of one activation row for t >= 1. At t = 1 this is the
// ordinary softmax; for t > 1 the normalizer comes from n_iters fixed-point
// iterations.
RowVector tempered_softmax(const Eigen::Ref<const RowVector>& activations, double t,
                           int n_iters);

// Batch-mean bi-tempered logistic loss:
//   sum_j [ -y_j log_t1(p_j) + (p_j^(2-t1) - y_j^(2-t1)) / (2-t1) ]
// with p = tempered_softmax(activations, t2). Reduces to soft
// cross-entropy at t1 = t2 = 1. If logit_grad is non-null it receives the
// gradient with respect to the activations.
double bitempered_loss(const Matrix& activations, const Matrix& targets, double t1, double t2,
                       int n_iters, Matrix* logit_grad = nullptr);

}  // namespace churnlab
