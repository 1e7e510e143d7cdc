#include "churnlab/losses.hpp"

#include "churnlab/bitempered.hpp"
#include "churnlab/error.hpp"

#include <fmt/format.h>

#include <cmath>

namespace churnlab {

namespace {

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) throw NumericError(fmt::format("{} contain NaN or infinity", what));
}

void require_same_shape(const Matrix& a, const Matrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError(fmt::format("{}: shapes {}x{} and {}x{} differ", what, a.rows(), a.cols(),
                                 b.rows(), b.cols()));
  }
}

// Mean cross-entropy of softmax(logits) against targets, with the exact
// gradient of the clamped expression.
double cross_entropy_from_logits(const Matrix& logits, const Matrix& targets, Matrix* grad) {
  const Matrix probs = softmax_rows(logits);
  const double inv_m = 1.0 / static_cast<double>(logits.rows());
  double total = 0.0;
  if (grad) grad->resize(logits.rows(), logits.cols());
  for (Eigen::Index i = 0; i < probs.rows(); ++i) {
    double active_mass = 0.0;
    for (Eigen::Index j = 0; j < probs.cols(); ++j) {
      const double p = probs(i, j);
      const double t = targets(i, j);
      total -= t * std::log(std::max(p, kLogClamp));
      if (p > kLogClamp) active_mass += t;
    }
    if (grad) {
      for (Eigen::Index j = 0; j < probs.cols(); ++j) {
        const double t_active = probs(i, j) > kLogClamp ? targets(i, j) : 0.0;
        (*grad)(i, j) = (probs(i, j) * active_mass - t_active) * inv_m;
      }
    }
  }
  return total * inv_m;
}

double lp_penalty(const Matrix& logits, double a, int p, Matrix* grad) {
  const double inv_m = 1.0 / static_cast<double>(logits.rows());
  double total = 0.0;
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    const auto row = logits.row(i);
    if (p == 1) {
      total += row.cwiseAbs().sum();
      if (grad) {
        for (Eigen::Index j = 0; j < row.size(); ++j) {
          const double s = row[j] > 0.0 ? 1.0 : (row[j] < 0.0 ? -1.0 : 0.0);
          (*grad)(i, j) += a * s * inv_m;
        }
      }
    } else {
      const double norm = row.norm();
      total += norm;
      if (grad && norm > 0.0) grad->row(i) += (a * inv_m / norm) * row;
    }
  }
  return a * total * inv_m;
}

struct LossVisitor {
  const Matrix& logits;
  const Matrix& targets;
  Matrix* grad;

  double operator()(const CrossEntropyLoss&) const {
    return cross_entropy_from_logits(logits, targets, grad);
  }
  double operator()(const LpRegLoss& spec) const {
    const double ce = cross_entropy_from_logits(logits, targets, grad);
    return ce + lp_penalty(logits, spec.a, spec.p, grad);
  }
  double operator()(const BiTemperedLoss& spec) const {
    return bitempered_loss(logits, targets, spec.t1, spec.t2, spec.n_iters, grad);
  }
};

}  // namespace

Matrix softmax_rows(const Matrix& logits) {
  require_finite(logits, "logits");
  Matrix out(logits.rows(), logits.cols());
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    const double mx = logits.row(i).maxCoeff();
    double sum = 0.0;
    for (Eigen::Index j = 0; j < logits.cols(); ++j) {
      out(i, j) = std::exp(logits(i, j) - mx);
      sum += out(i, j);
    }
    out.row(i) /= sum;
  }
  return out;
}

Matrix log_softmax_rows(const Matrix& logits) {
  require_finite(logits, "logits");
  Matrix out(logits.rows(), logits.cols());
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    const double mx = logits.row(i).maxCoeff();
    double sum = 0.0;
    for (Eigen::Index j = 0; j < logits.cols(); ++j) sum += std::exp(logits(i, j) - mx);
    const double lse = mx + std::log(sum);
    out.row(i) = logits.row(i).array() - lse;
  }
  return out;
}

double soft_cross_entropy(const Matrix& probs, const Matrix& targets) {
  require_same_shape(probs, targets, "soft_cross_entropy");
  if (probs.rows() == 0) throw ShapeError("soft_cross_entropy: empty batch");
  double total = 0.0;
  for (Eigen::Index i = 0; i < probs.rows(); ++i) {
    for (Eigen::Index j = 0; j < probs.cols(); ++j) {
      total -= targets(i, j) * std::log(std::max(probs(i, j), kLogClamp));
    }
  }
  return total / static_cast<double>(probs.rows());
}

double soft_cross_entropy_single(const Eigen::Ref<const Vector>& probs,
                                 const Eigen::Ref<const Vector>& target) {
  if (probs.size() != target.size()) {
    throw ShapeError(fmt::format("soft_cross_entropy: lengths {} and {} differ", probs.size(),
                                 target.size()));
  }
  double total = 0.0;
  for (Eigen::Index j = 0; j < probs.size(); ++j) {
    total -= target[j] * std::log(std::max(probs[j], kLogClamp));
  }
  return total;
}

void validate(const LossSpec& spec) {
  if (const auto* lp = std::get_if<LpRegLoss>(&spec)) {
    if (lp->p != 1 && lp->p != 2) throw ParameterError(fmt::format("unsupported p = {}", lp->p));
    if (!(lp->a >= 0.0) || !std::isfinite(lp->a)) {
      throw ParameterError("regularization weight a must be >= 0");
    }
  } else if (const auto* bt = std::get_if<BiTemperedLoss>(&spec)) {
    if (!(bt->t1 > 0.0 && bt->t1 <= 1.0)) throw ParameterError("bi-tempered t1 must be in (0, 1]");
    if (!(bt->t2 >= 1.0) || !std::isfinite(bt->t2)) {
      throw ParameterError("bi-tempered t2 must be >= 1");
    }
    if (bt->n_iters < 1) throw ParameterError("bi-tempered n_iters must be >= 1");
  }
}

std::string describe(const LossSpec& spec) {
  struct {
    std::string operator()(const CrossEntropyLoss&) const { return "cross_entropy"; }
    std::string operator()(const LpRegLoss& s) const {
      return fmt::format("l{}_reg(a={})", s.p, s.a);
    }
    std::string operator()(const BiTemperedLoss& s) const {
      return fmt::format("bitempered(t1={},t2={},n_iters={})", s.t1, s.t2, s.n_iters);
    }
  } visitor;
  return std::visit(visitor, spec);
}

LossAndGrad loss_and_grad(const LossSpec& spec, const Matrix& logits, const Matrix& targets) {
  validate(spec);
  require_same_shape(logits, targets, "loss");
  if (logits.rows() == 0) throw ShapeError("loss: empty batch");
  LossAndGrad out;
  out.loss = std::visit(LossVisitor{logits, targets, &out.logit_grad}, spec);
  return out;
}

double loss_value(const LossSpec& spec, const Matrix& logits, const Matrix& targets) {
  validate(spec);
  require_same_shape(logits, targets, "loss");
  if (logits.rows() == 0) throw ShapeError("loss: empty batch");
  return std::visit(LossVisitor{logits, targets, nullptr}, spec);
}

double lp_reg_loss(const Matrix& logits, const Matrix& targets, double a, int p) {
  return loss_value(LpRegLoss{a, p}, logits, targets);
}

}  // namespace churnlab
