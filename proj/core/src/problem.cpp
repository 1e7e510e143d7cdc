#include "churnlab/problem.hpp"

#include "churnlab/error.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numbers>

namespace churnlab {

double EtaSpec::of_mean(double m) const {
  switch (kind) {
    case EtaKind::constant:
      return value;
    case EtaKind::linear:
      return m;
    case EtaKind::quadratic:
      return m * m;
    case EtaKind::sine:
      return 0.5 * (1.0 + std::sin(2.0 * std::numbers::pi * m));
  }
  return value;
}

double EtaSpec::operator()(const Eigen::Ref<const RowVector>& x) const {
  return of_mean(x.mean());
}

double EtaSpec::antiderivative(double m) const {
  switch (kind) {
    case EtaKind::constant:
      return value * m;
    case EtaKind::linear:
      return 0.5 * m * m;
    case EtaKind::quadratic:
      return m * m * m / 3.0;
    case EtaKind::sine:
      return 0.5 * m - std::cos(2.0 * std::numbers::pi * m) / (4.0 * std::numbers::pi);
  }
  return 0.0;
}

double EtaSpec::c_alpha(int dim) const {
  // |m(x) - m(x')| <= |x - x'| / sqrt(D).
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
  switch (kind) {
    case EtaKind::constant:
      return 0.0;
    case EtaKind::linear:
      return scale;
    case EtaKind::quadratic:
      return 2.0 * scale;
    case EtaKind::sine:
      return std::numbers::pi * scale;
  }
  return 0.0;
}

EtaSpec parse_eta(const std::string& name) {
  if (name == "linear") return {EtaKind::linear};
  if (name == "quadratic") return {EtaKind::quadratic};
  if (name == "sine") return {EtaKind::sine};
  if (name.rfind("constant", 0) == 0) {
    EtaSpec eta{EtaKind::constant};
    const auto colon = name.find(':');
    if (colon != std::string::npos) {
      try {
        eta.value = std::stod(name.substr(colon + 1));
      } catch (const std::exception&) {
        throw ParameterError(fmt::format("bad constant label function '{}'", name));
      }
    }
    if (!(eta.value >= 0.0 && eta.value <= 1.0)) {
      throw ParameterError("constant label function must lie in [0, 1]");
    }
    return eta;
  }
  throw ParameterError(
      fmt::format("unknown label function '{}' (linear, quadratic, sine, constant:<v>)", name));
}

std::string to_string(const EtaSpec& eta) {
  switch (eta.kind) {
    case EtaKind::constant:
      return fmt::format("constant:{}", eta.value);
    case EtaKind::linear:
      return "linear";
    case EtaKind::quadratic:
      return "quadratic";
    case EtaKind::sine:
      return "sine";
  }
  return "unknown";
}

SyntheticProblem SyntheticProblem::uniform_cube(int dim, EtaSpec eta) {
  if (dim < 1) throw ParameterError("dimension must be >= 1");
  SyntheticProblem p;
  p.dim = dim;
  p.density = UniformCube{};
  p.eta = eta;
  p.alpha = eta.alpha();
  p.c_alpha = eta.c_alpha(dim);
  p.omega = std::ldexp(1.0, -dim);
  p.r0 = 1.0;
  p.density_floor = 1.0;
  return p;
}

Matrix SyntheticProblem::sample_points(std::size_t n, Rng& rng) const {
  Matrix x(static_cast<Eigen::Index>(n), dim);
  if (std::holds_alternative<UniformCube>(density)) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = u(rng);
    return x;
  }
  const auto& mix = std::get<GaussianMixture>(density);
  if (mix.means.empty() || mix.means.size() != mix.weights.size()) {
    throw ConfigError("Gaussian mixture needs one weight per mean");
  }
  std::discrete_distribution<std::size_t> pick(mix.weights.begin(), mix.weights.end());
  std::normal_distribution<double> noise(0.0, mix.stddev);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const RowVector& mu = mix.means[pick(rng)];
    if (mu.size() != dim) throw ShapeError("mixture mean has the wrong dimension");
    for (int j = 0; j < dim; ++j) x(i, j) = mu[j] + noise(rng);
  }
  return x;
}

Vector SyntheticProblem::eta_at(const Matrix& points) const {
  Vector out(points.rows());
  for (Eigen::Index i = 0; i < points.rows(); ++i) out[i] = eta(points.row(i));
  return out;
}

Matrix soft_eta_labels(const SyntheticProblem& problem, const Matrix& points) {
  const Vector eta = problem.eta_at(points);
  Matrix labels(points.rows(), 2);
  labels.col(0) = eta;
  labels.col(1) = (1.0 - eta.array()).matrix();
  return labels;
}

Dataset sample_dataset(const SyntheticProblem& problem, std::size_t n, std::uint64_t seed) {
  if (n < 1) throw ParameterError("need at least one sample");
  Rng rng(seed);
  Dataset data;
  data.name = fmt::format("smooth-{}-d{}", to_string(problem.eta), problem.dim);
  data.seed = seed;
  data.num_classes = 2;
  data.class_names = {"1", "0"};
  data.features = problem.sample_points(n, rng);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  data.classes.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double p = problem.eta(data.features.row(static_cast<Eigen::Index>(i)));
    data.classes[i] = u(rng) < p ? 0 : 1;  // class 0 <=> Y = 1
  }
  data.labels = one_hot_matrix(data.classes, 2);
  return data;
}

std::pair<Dataset, SyntheticProblem> gen_smooth_problem(std::size_t n, int dim,
                                                        const EtaSpec& eta,
                                                        std::uint64_t seed) {
  SyntheticProblem problem = SyntheticProblem::uniform_cube(dim, eta);
  Dataset data = sample_dataset(problem, n, seed);
  return {std::move(data), std::move(problem)};
}

}  // namespace churnlab
