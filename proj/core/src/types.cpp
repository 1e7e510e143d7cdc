#include "churnlab/types.hpp"

#include "churnlab/error.hpp"

#include <cmath>
#include <string>

namespace churnlab {

bool on_simplex(const Eigen::Ref<const Vector>& p, double tol) {
  if (p.size() < 2) return false;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double v = p[i];
    if (!std::isfinite(v) || v < -tol || v > 1.0 + tol) return false;
    sum += v;
  }
  return std::abs(sum - 1.0) <= tol;
}

void require_simplex(const Eigen::Ref<const Vector>& p, const char* what, double tol) {
  if (!on_simplex(p, tol)) {
    throw ParameterError(std::string(what) + " is not a probability vector");
  }
}

void require_simplex_rows(const Matrix& rows, const char* what, double tol) {
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    if (!on_simplex(rows.row(i).transpose(), tol)) {
      throw ParameterError(std::string(what) + " row " + std::to_string(i) +
                           " is not a probability vector");
    }
  }
}

SoftLabel uniform_label(int num_classes) {
  if (num_classes < 2) throw ParameterError("need at least two classes");
  return SoftLabel::Constant(num_classes, 1.0 / num_classes);
}

SoftLabel one_hot(int class_index, int num_classes) {
  if (num_classes < 2) throw ParameterError("need at least two classes");
  if (class_index < 0 || class_index >= num_classes) {
    throw ParameterError("class index " + std::to_string(class_index) + " outside [0, " +
                         std::to_string(num_classes) + ")");
  }
  SoftLabel y = SoftLabel::Zero(num_classes);
  y[class_index] = 1.0;
  return y;
}

Matrix one_hot_matrix(std::span<const int> classes, int num_classes) {
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(classes.size()), num_classes);
  for (std::size_t i = 0; i < classes.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = one_hot(classes[i], num_classes).transpose();
  }
  return out;
}

int argmax(const Eigen::Ref<const RowVector>& row) {
  int best = 0;
  for (Eigen::Index j = 1; j < row.size(); ++j) {
    if (row[j] > row[best]) best = static_cast<int>(j);
  }
  return best;
}

bool all_finite(const Matrix& m) { return m.allFinite(); }

}  // namespace churnlab
