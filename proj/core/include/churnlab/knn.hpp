#pragma once

#include "churnlab/types.hpp"

#include <cstddef>
#include <vector>

namespace churnlab {

// The k-NN ball of a query: radius r_k is the k-th smallest distance and
// `members` lists (ascending) every point at distance <= r_k, so ties at the
// radius make the set larger than k.
struct NeighborQueryResult {
  double radius = 0.0;
  std::vector<std::size_t> members;
};

// Squared Euclidean distance, summed coordinate by coordinate in order.
// Every neighbor routine compares these exact values.
double squared_distance(const Eigen::Ref<const RowVector>& a,
                        const Eigen::Ref<const RowVector>& b);

// Exact k-NN ball by a linear scan. Throws ParameterError unless
// 1 <= k <= n and ShapeError on a width mismatch.
NeighborQueryResult knn_query(const Eigen::Ref<const RowVector>& query, const Matrix& points,
                              int k);

// Mean of the member labels of the k-NN ball (rows of `labels`).
SoftLabel knn_label(const Eigen::Ref<const RowVector>& query, const Matrix& points,
                    const Matrix& labels, int k);

// Sorted index over one-dimensional points. Returns the same balls as
// knn_query, in O(log n + |N_k|) per query.
class LineIndex {
 public:
  explicit LineIndex(const Matrix& points);

  NeighborQueryResult query(double x, int k) const;
  std::size_t size() const { return coords_.size(); }

 private:
  std::vector<double> coords_;       // sorted
  std::vector<std::size_t> order_;   // order_[i]: original index of coords_[i]
};

// k-NN labels of every row of `queries` against (points, labels). Uses a
// LineIndex when the points are one-dimensional, a linear scan otherwise.
Matrix knn_labels(const Matrix& queries, const Matrix& points, const Matrix& labels, int k);

}  // namespace churnlab
