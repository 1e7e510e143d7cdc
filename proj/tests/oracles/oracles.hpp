#pragma once

// Independent reference implementations used only by the tests. They favour
// obviousness over speed: full sorts, explicit loops, formulas written out.

#include "churnlab/mlp.hpp"
#include "churnlab/types.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

using churnlab::Matrix;
using churnlab::Vector;

struct Ball {
  double radius = 0.0;
  std::vector<std::size_t> members;  // ascending
};

// Sorts all n (distance^2, index) pairs and reads off the k-th distance.
Ball brute_knn(const Eigen::Ref<const churnlab::RowVector>& query, const Matrix& points, int k);

// Mean label over the brute-force ball, summed in ascending index order.
Vector brute_knn_label(const Eigen::Ref<const churnlab::RowVector>& query, const Matrix& points,
                       const Matrix& labels, int k);

// Central differences of f at x with step h, one coordinate at a time.
Vector central_difference(const std::function<double(const Vector&)>& f, const Vector& x,
                          double h = 1e-5);

// max_i |a_i - b_i| / max(|a_i|, |b_i|, floor).
double max_relative_error(const Vector& a, const Vector& b, double floor = 1e-6);

// Smallest |pre-activation| over all hidden units and all rows; used to
// avoid ReLU kinks in finite-difference checks.
double min_abs_preactivation(const churnlab::MlpParams& params, const Matrix& features);

// Plain softmax written from the definition (with max shift).
Matrix softmax(const Matrix& logits);

// Mean over rows of -sum t log max(p, 1e-12).
double cross_entropy(const Matrix& probs, const Matrix& targets);

// Non-dominated points under (max accuracy, min churn), O(n^2).
std::vector<bool> pareto(const std::vector<std::pair<double, double>>& points);

// The k << n bound written out term by term.
double theorem1(double k, double n, int dim, double alpha, double c_alpha, double omega,
                double floor, double delta);
double theorem2(double n, int dim, double beta, double delta);

// Random probability vector of length L (Dirichlet(1) via exponentials).
Vector random_simplex(int L, std::mt19937_64& rng);

Matrix random_gaussian(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng);

}  // namespace oracle
