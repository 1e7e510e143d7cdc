#include "churnlab/knn.hpp"

#include "churnlab/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace churnlab {

namespace {

void check_k(int k, Eigen::Index n) {
  if (n < 1) throw ParameterError("k-NN query over an empty point set");
  if (k < 1 || k > n) throw ParameterError(fmt::format("k = {} outside [1, {}]", k, n));
}

SoftLabel mean_label(const Matrix& labels, const std::vector<std::size_t>& members) {
  SoftLabel sum = SoftLabel::Zero(labels.cols());
  for (std::size_t i : members) sum += labels.row(static_cast<Eigen::Index>(i)).transpose();
  return sum / static_cast<double>(members.size());
}

}  // namespace

double squared_distance(const Eigen::Ref<const RowVector>& a,
                        const Eigen::Ref<const RowVector>& b) {
  double sum = 0.0;
  for (Eigen::Index j = 0; j < a.size(); ++j) {
    const double diff = a[j] - b[j];
    sum += diff * diff;
  }
  return sum;
}

NeighborQueryResult knn_query(const Eigen::Ref<const RowVector>& query, const Matrix& points,
                              int k) {
  check_k(k, points.rows());
  if (query.size() != points.cols()) {
    throw ShapeError(fmt::format("query width {} does not match points width {}", query.size(),
                                 points.cols()));
  }
  const auto n = static_cast<std::size_t>(points.rows());
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) {
    d2[i] = squared_distance(query, points.row(static_cast<Eigen::Index>(i)));
  }
  std::vector<double> scratch = d2;
  auto kth = scratch.begin() + (k - 1);
  std::nth_element(scratch.begin(), kth, scratch.end());
  const double r2 = *kth;

  NeighborQueryResult result;
  result.radius = std::sqrt(r2);
  for (std::size_t i = 0; i < n; ++i) {
    if (d2[i] <= r2) result.members.push_back(i);
  }
  return result;
}

SoftLabel knn_label(const Eigen::Ref<const RowVector>& query, const Matrix& points,
                    const Matrix& labels, int k) {
  if (labels.rows() != points.rows()) throw ShapeError("labels and points differ in length");
  return mean_label(labels, knn_query(query, points, k).members);
}

LineIndex::LineIndex(const Matrix& points) {
  if (points.cols() != 1) throw ShapeError("LineIndex needs one-dimensional points");
  const auto n = static_cast<std::size_t>(points.rows());
  order_.resize(n);
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
    return points(static_cast<Eigen::Index>(a), 0) < points(static_cast<Eigen::Index>(b), 0);
  });
  coords_.resize(n);
  for (std::size_t i = 0; i < n; ++i) coords_[i] = points(static_cast<Eigen::Index>(order_[i]), 0);
}

NeighborQueryResult LineIndex::query(double x, int k) const {
  check_k(k, static_cast<Eigen::Index>(coords_.size()));
  auto d2 = [&](std::size_t i) {
    const double diff = x - coords_[i];
    return diff * diff;
  };
  const auto pos = static_cast<std::ptrdiff_t>(
      std::lower_bound(coords_.begin(), coords_.end(), x) - coords_.begin());
  const auto n = static_cast<std::ptrdiff_t>(coords_.size());

  // Merge the two sides, each already ordered by distance, until k points
  // have been taken; the last one taken sits at the k-th smallest distance.
  std::ptrdiff_t left = pos - 1;
  std::ptrdiff_t right = pos;
  double r2 = 0.0;
  for (int taken = 0; taken < k; ++taken) {
    const bool take_left =
        right >= n || (left >= 0 && d2(static_cast<std::size_t>(left)) <=
                                        d2(static_cast<std::size_t>(right)));
    if (take_left) {
      r2 = d2(static_cast<std::size_t>(left--));
    } else {
      r2 = d2(static_cast<std::size_t>(right++));
    }
  }
  std::ptrdiff_t lo = pos;
  while (lo > 0 && d2(static_cast<std::size_t>(lo - 1)) <= r2) --lo;
  std::ptrdiff_t hi = pos;
  while (hi < n && d2(static_cast<std::size_t>(hi)) <= r2) ++hi;

  NeighborQueryResult result;
  result.radius = std::sqrt(r2);
  result.members.reserve(static_cast<std::size_t>(hi - lo));
  for (std::ptrdiff_t i = lo; i < hi; ++i) result.members.push_back(order_[static_cast<std::size_t>(i)]);
  std::sort(result.members.begin(), result.members.end());
  return result;
}

Matrix knn_labels(const Matrix& queries, const Matrix& points, const Matrix& labels, int k) {
  if (labels.rows() != points.rows()) throw ShapeError("labels and points differ in length");
  if (queries.cols() != points.cols()) throw ShapeError("query and point widths differ");
  check_k(k, points.rows());
  Matrix out(queries.rows(), labels.cols());
  if (points.cols() == 1) {
    const LineIndex index(points);
    for (Eigen::Index q = 0; q < queries.rows(); ++q) {
      out.row(q) = mean_label(labels, index.query(queries(q, 0), k).members).transpose();
    }
  } else {
    for (Eigen::Index q = 0; q < queries.rows(); ++q) {
      out.row(q) = mean_label(labels, knn_query(queries.row(q), points, k).members).transpose();
    }
  }
  return out;
}

}  // namespace churnlab
