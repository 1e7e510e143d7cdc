#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <span>
#include <vector>

namespace churnlab {

// Row-major so that one example (or one label) is one contiguous row.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

// A probability vector over L >= 2 classes. Batches of soft labels are
// stored as the rows of a Matrix.
using SoftLabel = Eigen::VectorXd;

inline constexpr double kSimplexTolerance = 1e-9;

// True iff every entry lies in [-tol, 1 + tol] and the entries sum to 1 within tol.
bool on_simplex(const Eigen::Ref<const Vector>& p, double tol = kSimplexTolerance);

// Throws ParameterError naming `what` if `p` is not a probability vector.
void require_simplex(const Eigen::Ref<const Vector>& p, const char* what,
                     double tol = kSimplexTolerance);

// Row-wise variant of require_simplex.
void require_simplex_rows(const Matrix& rows, const char* what,
                          double tol = kSimplexTolerance);

SoftLabel uniform_label(int num_classes);

// Exact one-hot vector; throws ParameterError if class_index is outside [0, L).
SoftLabel one_hot(int class_index, int num_classes);

Matrix one_hot_matrix(std::span<const int> classes, int num_classes);

// Index of the largest entry; ties go to the lowest index.
int argmax(const Eigen::Ref<const RowVector>& row);

bool all_finite(const Matrix& m);

}  // namespace churnlab
