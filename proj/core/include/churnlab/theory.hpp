#pragma once

#include "churnlab/dataset.hpp"
#include "churnlab/problem.hpp"
#include "churnlab/types.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace churnlab {

// Volume pi^(D/2) / Gamma(D/2 + 1) of the D-dimensional unit ball.
double unit_ball_volume(int dim);

struct Theorem1Constants {
  double alpha = 1.0;
  double c_alpha = 1.0;
  double omega = 1.0;
  double density_floor = 1.0;
  double r0 = 1.0;
};

struct Theorem1Bound {
  double value = 0.0;          // bias_term + variance_term
  double bias_term = 0.0;      // C_a (2k / (omega v_D n p0))^(alpha/D)
  double variance_term = 0.0;  // sqrt((2 ln(4D/delta) + 2D ln n) / k)
  double k_min = 0.0;          // 2^8 D ln^2(4/delta) ln n
  double k_max = 0.0;          // omega p0 v_D r0^D n / 2
  bool k_admissible = false;   // informational; the bound is evaluated regardless
};

// Uniform k-NN label error bound for k << n. Natural logarithms.
// Throws ParameterError for non-positive constants or delta outside (0, 1).
Theorem1Bound theorem1_bound(double k, double n, int dim, const Theorem1Constants& constants,
                             double delta);
Theorem1Constants constants_of(const SyntheticProblem& problem);

// 3 sqrt((2 ln(4D/delta) + 2D ln n) / (beta n)) for k = floor(beta n).
double theorem2_bound(double n, int dim, double beta, double delta);

// Regular evaluation grid on [0, 1]^D with `per_axis` points per axis
// (endpoints included).
Matrix make_eval_grid(int dim, int per_axis);
int default_grid_per_axis(int dim);

using LabelFunction = std::function<double(const Eigen::Ref<const RowVector>&)>;

// max over grid rows of |eta_k(x)[0] - target(x)|, where eta_k is the k-NN
// label built from `sample`. Throws ParameterError if k > n.
double sup_deviation(const Dataset& sample, int k, const Matrix& grid,
                     const LabelFunction& target);

// sup_deviation against the problem's own label function.
double sup_error_estimate(const SyntheticProblem& problem, const Dataset& sample, int k,
                          const Matrix& grid);

// eta averaged over the smallest ball around x holding probability mass
// beta, for the uniform density on [0, 1] (closed-form integration).
// Throws ParameterError unless 0 < beta <= 1 and the problem is 1-D uniform.
double beta_smoothed_closed_form(double x, double beta, const SyntheticProblem& problem);

// Monte Carlo version for any density: the ceil(beta N)-th nearest of N
// draws sets the radius; eta is averaged over the draws inside it.
double beta_smoothed_monte_carlo(const Eigen::Ref<const RowVector>& x, double beta,
                                 const SyntheticProblem& problem, std::size_t oracle_samples,
                                 std::uint64_t seed);

// Closed form when available, Monte Carlo otherwise.
double beta_smoothed_oracle(const Eigen::Ref<const RowVector>& x, double beta,
                            const SyntheticProblem& problem, std::size_t oracle_samples,
                            std::uint64_t seed);

// How k grows with n.
struct KSchedule {
  enum class Kind { power, linear } kind = Kind::power;
  double exponent = 2.0 / 3.0;  // power: k = ceil(n^exponent)
  double beta = 0.1;            // linear: k = floor(beta n)

  int k_for(std::size_t n) const;
  std::string describe() const;
};

enum class RateTarget { eta, beta_smoothed };

struct RateOptions {
  RateTarget target = RateTarget::eta;
  int grid_per_axis = 0;              // 0 selects default_grid_per_axis(dim)
  double delta = 0.05;                // confidence used for the bound column
  std::size_t oracle_samples = 1000000;
  int workers = 1;
};

struct RateResult {
  std::vector<std::size_t> sample_sizes;
  std::vector<int> ks;
  std::vector<double> mean_errors;
  std::vector<double> std_errors;
  std::vector<double> bounds;
  double slope = 0.0;  // least-squares slope of ln(mean error) vs ln(n)
  int trials = 0;
  std::uint64_t seed = 0;
  int grid_points = 0;
};

// Least-squares slope of ln(y) on ln(x).
double log_log_slope(std::span<const double> x, std::span<const double> y);

// For each n, averages the sup error over `trials` independent samples.
// Trial t at size n uses a seed derived from (seed, n, t), so results do
// not depend on the worker count. Throws ParameterError unless n_grid is
// strictly increasing with >= 2 entries and trials >= 3.
RateResult rate_experiment(const SyntheticProblem& problem, const KSchedule& schedule,
                           const std::vector<std::size_t>& n_grid, int trials,
                           std::uint64_t seed, const RateOptions& options = {});

struct CoverageResult {
  std::vector<double> errors;  // per-trial sup error
  double bound = 0.0;
  int covered = 0;             // trials with error <= bound
  bool k_admissible = false;
};

// Repeats sup_error_estimate at fixed (n, k) and counts how often it stays
// under theorem1_bound with the given constants.
CoverageResult bound_coverage(const SyntheticProblem& problem, std::size_t n, int k,
                              const Theorem1Constants& constants, double delta, int trials,
                              std::uint64_t seed, int workers = 1);

std::string rate_csv(const RateResult& result);

}  // namespace churnlab
