#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace oracle {

Ball brute_knn(const Eigen::Ref<const churnlab::RowVector>& query, const Matrix& points, int k) {
  std::vector<std::pair<double, std::size_t>> all;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    double d2 = 0.0;
    for (Eigen::Index j = 0; j < points.cols(); ++j) {
      const double diff = query[j] - points(i, j);
      d2 += diff * diff;
    }
    all.emplace_back(d2, static_cast<std::size_t>(i));
  }
  std::sort(all.begin(), all.end());
  const double r2 = all[static_cast<std::size_t>(k - 1)].first;
  Ball ball;
  ball.radius = std::sqrt(r2);
  for (const auto& [d2, i] : all) {
    if (d2 <= r2) ball.members.push_back(i);
  }
  std::sort(ball.members.begin(), ball.members.end());
  return ball;
}

Vector brute_knn_label(const Eigen::Ref<const churnlab::RowVector>& query, const Matrix& points,
                       const Matrix& labels, int k) {
  const Ball ball = brute_knn(query, points, k);
  Vector sum = Vector::Zero(labels.cols());
  for (std::size_t i : ball.members) sum += labels.row(static_cast<Eigen::Index>(i)).transpose();
  return sum / static_cast<double>(ball.members.size());
}

Vector central_difference(const std::function<double(const Vector&)>& f, const Vector& x,
                          double h) {
  Vector grad(x.size());
  Vector probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + h;
    const double up = f(probe);
    probe[i] = x[i] - h;
    const double down = f(probe);
    probe[i] = x[i];
    grad[i] = (up - down) / (2.0 * h);
  }
  return grad;
}

double max_relative_error(const Vector& a, const Vector& b, double floor) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double scale = std::max({std::abs(a[i]), std::abs(b[i]), floor});
    worst = std::max(worst, std::abs(a[i] - b[i]) / scale);
  }
  return worst;
}

double min_abs_preactivation(const churnlab::MlpParams& params, const Matrix& features) {
  double smallest = INFINITY;
  Matrix h = features;
  for (int l = 0; l + 1 < params.num_layers(); ++l) {
    Matrix z = h * params.weights[l];
    z.rowwise() += params.biases[l].transpose();
    smallest = std::min(smallest, z.cwiseAbs().minCoeff());
    h = z.cwiseMax(0.0);
  }
  return smallest;
}

Matrix softmax(const Matrix& logits) {
  Matrix p(logits.rows(), logits.cols());
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    const double shift = logits.row(i).maxCoeff();
    double z = 0.0;
    for (Eigen::Index j = 0; j < logits.cols(); ++j) z += std::exp(logits(i, j) - shift);
    for (Eigen::Index j = 0; j < logits.cols(); ++j) p(i, j) = std::exp(logits(i, j) - shift) / z;
  }
  return p;
}

double cross_entropy(const Matrix& probs, const Matrix& targets) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < probs.rows(); ++i) {
    for (Eigen::Index j = 0; j < probs.cols(); ++j) {
      total -= targets(i, j) * std::log(std::max(probs(i, j), 1e-12));
    }
  }
  return total / static_cast<double>(probs.rows());
}

std::vector<bool> pareto(const std::vector<std::pair<double, double>>& points) {
  std::vector<bool> keep(points.size(), true);
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = 0; j < points.size(); ++j) {
      const bool no_worse = points[j].first >= points[i].first && points[j].second <= points[i].second;
      const bool better = points[j].first > points[i].first || points[j].second < points[i].second;
      if (no_worse && better) keep[i] = false;
    }
  }
  return keep;
}

double theorem1(double k, double n, int dim, double alpha, double c_alpha, double omega,
                double floor, double delta) {
  const double ball = std::pow(std::numbers::pi, dim / 2.0) / std::tgamma(dim / 2.0 + 1.0);
  const double bias = c_alpha * std::pow(2.0 * k / (omega * ball * n * floor), alpha / dim);
  const double variance =
      std::sqrt((2.0 * std::log(4.0 * dim / delta) + 2.0 * dim * std::log(n)) / k);
  return bias + variance;
}

double theorem2(double n, int dim, double beta, double delta) {
  return 3.0 * std::sqrt((2.0 * std::log(4.0 * dim / delta) + 2.0 * dim * std::log(n)) / (beta * n));
}

Vector random_simplex(int L, std::mt19937_64& rng) {
  std::exponential_distribution<double> e(1.0);
  Vector v(L);
  for (int j = 0; j < L; ++j) v[j] = e(rng);
  return v / v.sum();
}

Matrix random_gaussian(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = g(rng);
  return m;
}

}  // namespace oracle
