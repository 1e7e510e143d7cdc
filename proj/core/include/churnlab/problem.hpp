#pragma once

#include "churnlab/dataset.hpp"
#include "churnlab/random.hpp"
#include "churnlab/types.hpp"

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace churnlab {

// Label functions eta(x) = P(Y = 1 | X = x), all functions of the mean
// coordinate m(x) of x.
enum class EtaKind {
  constant,   // eta = value
  linear,     // eta = m
  quadratic,  // eta = m^2
  sine,       // eta = (1 + sin(2 pi m)) / 2
};

struct EtaSpec {
  EtaKind kind = EtaKind::linear;
  double value = 0.5;  // used by EtaKind::constant

  double operator()(const Eigen::Ref<const RowVector>& x) const;
  double of_mean(double m) const;

  // Antiderivative of eta as a function of the mean coordinate.
  double antiderivative(double m) const;

  // Hoelder exponent and constant with respect to the Euclidean norm in D dims.
  double alpha() const { return 1.0; }
  double c_alpha(int dim) const;
};

EtaSpec parse_eta(const std::string& name);
std::string to_string(const EtaSpec& eta);

struct UniformCube {};

// Isotropic Gaussian mixture with shared standard deviation.
struct GaussianMixture {
  std::vector<RowVector> means;
  std::vector<double> weights;
  double stddev = 1.0;
};

using Density = std::variant<UniformCube, GaussianMixture>;

// A binary problem with a known label function and the constants of the
// convergence assumptions. For the unit cube, omega = 2^-D (a corner keeps
// that fraction of any ball of radius < 1), r0 = 1 and the density floor is 1.
struct SyntheticProblem {
  int dim = 1;
  Density density = UniformCube{};
  EtaSpec eta;
  double alpha = 1.0;
  double c_alpha = 1.0;
  double omega = 0.5;
  double r0 = 1.0;
  double density_floor = 1.0;

  static SyntheticProblem uniform_cube(int dim, EtaSpec eta);

  Matrix sample_points(std::size_t n, Rng& rng) const;
  Vector eta_at(const Matrix& points) const;
  bool bounded_support() const { return std::holds_alternative<UniformCube>(density); }
};

// n points from the problem's density with hard labels Y ~ Bernoulli(eta(x)),
// encoded so that column 0 of the soft label is the indicator of Y = 1
// (class 0 is named "1", class 1 is named "0").
Dataset sample_dataset(const SyntheticProblem& problem, std::size_t n, std::uint64_t seed);

// Labels are hard draws Y ~ Bernoulli(eta(x)) stored so that column 0 of
// the soft label is the indicator of Y = 1: class 0 is named "1" and
// class 1 is named "0". Throws ParameterError for n < 1 or dim < 1.
std::pair<Dataset, SyntheticProblem> gen_smooth_problem(std::size_t n, int dim,
                                                        const EtaSpec& eta,
                                                        std::uint64_t seed);

// Label rows [eta(x), 1 - eta(x)] for the given points.
Matrix soft_eta_labels(const SyntheticProblem& problem, const Matrix& points);

}  // namespace churnlab
