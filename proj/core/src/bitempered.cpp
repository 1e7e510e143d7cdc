#include "churnlab/bitempered.hpp"

#include "churnlab/error.hpp"
#include "churnlab/losses.hpp"

#include <algorithm>
#include <cmath>

namespace churnlab {

double log_t(double x, double t) {
  if (t == 1.0) return std::log(x);
  return (std::pow(x, 1.0 - t) - 1.0) / (1.0 - t);
}

double exp_t(double x, double t) {
  if (t == 1.0) return std::exp(x);
  const double base = std::max(1.0 + (1.0 - t) * x, 0.0);
  return std::pow(base, 1.0 / (1.0 - t));
}

RowVector tempered_softmax(const Eigen::Ref<const RowVector>& activations, double t,
                           int n_iters) {
  if (!activations.allFinite()) throw NumericError("activations contain NaN or infinity");
  if (!(t >= 1.0)) throw ParameterError("tempered softmax requires t >= 1");
  const Eigen::Index L = activations.size();
  RowVector out(L);
  const double mu = activations.maxCoeff();
  if (t == 1.0) {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < L; ++j) {
      out[j] = std::exp(activations[j] - mu);
      sum += out[j];
    }
    return out / sum;
  }
  // Fixed-point iteration for the normalizer lambda with
  // sum_j exp_t(a_j - lambda) = 1.
  const RowVector shifted = activations.array() - mu;
  RowVector normalized = shifted;
  auto partition = [&](const RowVector& v) {
    double z = 0.0;
    for (Eigen::Index j = 0; j < L; ++j) z += exp_t(v[j], t);
    return z;
  };
  for (int it = 0; it < n_iters; ++it) {
    normalized = shifted * std::pow(partition(normalized), 1.0 - t);
  }
  const double z = partition(normalized);
  const double lambda = -log_t(1.0 / z, t) + mu;
  for (Eigen::Index j = 0; j < L; ++j) out[j] = exp_t(activations[j] - lambda, t);
  return out;
}

double bitempered_loss(const Matrix& activations, const Matrix& targets, double t1, double t2,
                       int n_iters, Matrix* logit_grad) {
  if (!(t1 > 0.0 && t1 <= 1.0)) throw ParameterError("bi-tempered t1 must be in (0, 1]");
  if (!(t2 >= 1.0) || !std::isfinite(t2)) throw ParameterError("bi-tempered t2 must be >= 1");
  if (n_iters < 1) throw ParameterError("bi-tempered n_iters must be >= 1");
  if (activations.rows() != targets.rows() || activations.cols() != targets.cols()) {
    throw ShapeError("bi-tempered loss: activation and target shapes differ");
  }
  const Eigen::Index m = activations.rows();
  const Eigen::Index L = activations.cols();
  if (m == 0) throw ShapeError("bi-tempered loss: empty batch");
  const double inv_m = 1.0 / static_cast<double>(m);
  const double two_minus_t1 = 2.0 - t1;
  if (logit_grad) logit_grad->resize(m, L);

  double total = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    const RowVector p = tempered_softmax(activations.row(i), t2, n_iters);
    double row_loss = 0.0;
    for (Eigen::Index j = 0; j < L; ++j) {
      const double y = targets(i, j);
      row_loss += -y * log_t(std::max(p[j], kLogClamp), t1) +
                  (std::pow(p[j], two_minus_t1) - std::pow(y, two_minus_t1)) / two_minus_t1;
    }
    total += row_loss;
    if (logit_grad) {
      // dl/dp_j = p_j^-t1 (p_j - y_j); through the tempered softmax the
      // normalizer moves with the escort distribution p^t2 / sum p^t2.
      RowVector d(L);
      RowVector escort(L);
      for (Eigen::Index j = 0; j < L; ++j) {
        d[j] = (p[j] - targets(i, j)) * std::pow(p[j], t2 - t1);
        escort[j] = std::pow(p[j], t2);
      }
      escort /= escort.sum();
      logit_grad->row(i) = (d - escort * d.sum()) * inv_m;
    }
  }
  return total * inv_m;
}

}  // namespace churnlab
