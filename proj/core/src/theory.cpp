#include "churnlab/theory.hpp"

#include "churnlab/error.hpp"
#include "churnlab/knn.hpp"
#include "churnlab/parallel.hpp"
#include "churnlab/random.hpp"

#include <fmt/format.h>

#include <cmath>
#include <limits>
#include <numbers>

namespace churnlab {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ParameterError(fmt::format("{} = {} must be positive", name, v));
  }
}

void require_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ParameterError(fmt::format("delta = {} outside (0, 1)", delta));
  }
}

// Shared log term 2 ln(4D/delta) + 2D ln n of both bounds.
double union_log_term(double n, int dim, double delta) {
  return 2.0 * std::log(4.0 * dim / delta) + 2.0 * dim * std::log(n);
}

double max_deviation(const Dataset& sample, int k, const Matrix& grid, const Vector& target) {
  if (k < 1 || static_cast<std::size_t>(k) > sample.size()) {
    throw ParameterError(fmt::format("k = {} outside [1, {}]", k, sample.size()));
  }
  const Matrix eta_k = knn_labels(grid, sample.features, sample.labels, k);
  double worst = 0.0;
  for (Eigen::Index q = 0; q < grid.rows(); ++q) {
    worst = std::max(worst, std::abs(eta_k(q, 0) - target[q]));
  }
  return worst;
}

Vector evaluate_on(const Matrix& grid, const LabelFunction& f) {
  Vector out(grid.rows());
  for (Eigen::Index q = 0; q < grid.rows(); ++q) out[q] = f(grid.row(q));
  return out;
}

}  // namespace

double unit_ball_volume(int dim) {
  if (dim < 1) throw ParameterError(fmt::format("dimension {} must be >= 1", dim));
  const double half = 0.5 * dim;
  return std::exp(half * std::log(std::numbers::pi) - std::lgamma(half + 1.0));
}

Theorem1Bound theorem1_bound(double k, double n, int dim, const Theorem1Constants& c,
                             double delta) {
  require_positive(k, "k");
  require_positive(n, "n");
  require_positive(c.alpha, "alpha");
  require_positive(c.c_alpha, "C_alpha");
  require_positive(c.omega, "omega");
  require_positive(c.density_floor, "density floor");
  require_positive(c.r0, "r0");
  require_delta(delta);
  const double v = unit_ball_volume(dim);
  Theorem1Bound out;
  out.bias_term =
      c.c_alpha * std::pow(2.0 * k / (c.omega * v * n * c.density_floor), c.alpha / dim);
  out.variance_term = std::sqrt(union_log_term(n, dim, delta) / k);
  out.value = out.bias_term + out.variance_term;
  const double log4d = std::log(4.0 / delta);
  out.k_min = 256.0 * dim * log4d * log4d * std::log(n);
  out.k_max = 0.5 * c.omega * c.density_floor * v * std::pow(c.r0, dim) * n;
  out.k_admissible = out.k_min <= k && k <= out.k_max;
  return out;
}

Theorem1Constants constants_of(const SyntheticProblem& problem) {
  return {problem.alpha, problem.c_alpha, problem.omega, problem.density_floor, problem.r0};
}

double theorem2_bound(double n, int dim, double beta, double delta) {
  require_positive(n, "n");
  if (dim < 1) throw ParameterError("dimension must be >= 1");
  if (!(beta > 0.0 && beta < 1.0)) throw ParameterError(fmt::format("beta = {} outside (0, 1)", beta));
  require_delta(delta);
  return 3.0 * std::sqrt(union_log_term(n, dim, delta) / (beta * n));
}

int default_grid_per_axis(int dim) {
  if (dim == 1) return 512;
  if (dim == 2) return 64;
  return 8;
}

Matrix make_eval_grid(int dim, int per_axis) {
  if (dim < 1 || per_axis < 2) throw ParameterError("evaluation grid needs dim >= 1 and >= 2 points per axis");
  Eigen::Index total = 1;
  for (int d = 0; d < dim; ++d) total *= per_axis;
  Matrix grid(total, dim);
  for (Eigen::Index i = 0; i < total; ++i) {
    Eigen::Index rest = i;
    for (int d = dim - 1; d >= 0; --d) {
      grid(i, d) = static_cast<double>(rest % per_axis) / (per_axis - 1);
      rest /= per_axis;
    }
  }
  return grid;
}

double sup_deviation(const Dataset& sample, int k, const Matrix& grid,
                     const LabelFunction& target) {
  return max_deviation(sample, k, grid, evaluate_on(grid, target));
}

double sup_error_estimate(const SyntheticProblem& problem, const Dataset& sample, int k,
                          const Matrix& grid) {
  return sup_deviation(sample, k, grid,
                       [&](const Eigen::Ref<const RowVector>& x) { return problem.eta(x); });
}

double beta_smoothed_closed_form(double x, double beta, const SyntheticProblem& problem) {
  if (!(beta > 0.0 && beta <= 1.0)) throw ParameterError(fmt::format("beta = {} outside (0, 1]", beta));
  if (problem.dim != 1 || !problem.bounded_support()) {
    throw ParameterError("closed-form smoothing needs the uniform density on [0, 1]");
  }
  // Smallest interval around x with length (= mass) beta, clipped to [0, 1].
  double lo = x - 0.5 * beta;
  double hi = x + 0.5 * beta;
  if (lo < 0.0) {
    lo = 0.0;
    hi = beta;
  } else if (hi > 1.0) {
    lo = 1.0 - beta;
    hi = 1.0;
  }
  return (problem.eta.antiderivative(hi) - problem.eta.antiderivative(lo)) / beta;
}

double beta_smoothed_monte_carlo(const Eigen::Ref<const RowVector>& x, double beta,
                                 const SyntheticProblem& problem, std::size_t oracle_samples,
                                 std::uint64_t seed) {
  if (!(beta > 0.0 && beta <= 1.0)) throw ParameterError(fmt::format("beta = {} outside (0, 1]", beta));
  if (oracle_samples < 1) throw ParameterError("oracle needs at least one sample");
  Rng rng(seed);
  const Matrix points = problem.sample_points(oracle_samples, rng);
  const Matrix values = problem.eta_at(points);
  const auto k = static_cast<int>(
      std::ceil(beta * static_cast<double>(oracle_samples) - 1e-9));
  return knn_label(x, points, values, std::max(k, 1))[0];
}

double beta_smoothed_oracle(const Eigen::Ref<const RowVector>& x, double beta,
                            const SyntheticProblem& problem, std::size_t oracle_samples,
                            std::uint64_t seed) {
  if (problem.dim == 1 && problem.bounded_support()) {
    return beta_smoothed_closed_form(x[0], beta, problem);
  }
  return beta_smoothed_monte_carlo(x, beta, problem, oracle_samples, seed);
}

int KSchedule::k_for(std::size_t n) const {
  const double nd = static_cast<double>(n);
  double k = kind == Kind::power ? std::ceil(std::pow(nd, exponent) - 1e-9)
                                 : std::floor(beta * nd + 1e-9);
  k = std::clamp(k, 1.0, nd);
  return static_cast<int>(k);
}

std::string KSchedule::describe() const {
  return kind == Kind::power ? fmt::format("k=ceil(n^{})", exponent)
                             : fmt::format("k=floor({}*n)", beta);
}

double log_log_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw ParameterError("slope needs >= 2 paired points");
  double mx = 0.0, my = 0.0;
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
      throw NumericError("log-log slope needs strictly positive values");
    }
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
    mx += lx.back();
    my += ly.back();
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  return sxy / sxx;
}

RateResult rate_experiment(const SyntheticProblem& problem, const KSchedule& schedule,
                           const std::vector<std::size_t>& n_grid, int trials,
                           std::uint64_t seed, const RateOptions& options) {
  if (n_grid.size() < 2) throw ParameterError("rate experiment needs at least two sample sizes");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] < 1 || (i > 0 && n_grid[i] <= n_grid[i - 1])) {
      throw ParameterError("sample sizes must be positive and strictly increasing");
    }
  }
  if (trials < 3) throw ParameterError("rate experiment needs at least three trials");
  if (options.target == RateTarget::beta_smoothed && schedule.kind != KSchedule::Kind::linear) {
    throw ParameterError("the beta-smoothed target needs a linear k schedule");
  }

  const int per_axis =
      options.grid_per_axis > 0 ? options.grid_per_axis : default_grid_per_axis(problem.dim);
  const Matrix grid = make_eval_grid(problem.dim, per_axis);
  Vector target(grid.rows());
  for (Eigen::Index q = 0; q < grid.rows(); ++q) {
    target[q] = options.target == RateTarget::eta
                    ? problem.eta(grid.row(q))
                    : beta_smoothed_oracle(grid.row(q), schedule.beta, problem,
                                           options.oracle_samples,
                                           mix_seed(seed, static_cast<std::uint64_t>(q)));
  }

  const std::size_t sizes = n_grid.size();
  const auto t_count = static_cast<std::size_t>(trials);
  std::vector<double> errors(sizes * t_count);
  parallel_for(errors.size(), options.workers, [&](std::size_t task) {
    const std::size_t i = task / t_count;
    const std::size_t t = task % t_count;
    const std::size_t n = n_grid[i];
    const std::uint64_t trial_seed =
        mix_seed(mix_seed(mix_seed(seed, streams::kTrial), n), t);
    const Dataset sample = sample_dataset(problem, n, trial_seed);
    errors[task] = max_deviation(sample, schedule.k_for(n), grid, target);
  });

  RateResult result;
  result.trials = trials;
  result.seed = seed;
  result.grid_points = static_cast<int>(grid.rows());
  std::vector<double> ns;
  for (std::size_t i = 0; i < sizes; ++i) {
    const std::size_t n = n_grid[i];
    const auto stats = [&] {
      struct { double mean, std; } r{};
      std::vector<double> v(errors.begin() + static_cast<std::ptrdiff_t>(i * t_count),
                            errors.begin() + static_cast<std::ptrdiff_t>((i + 1) * t_count));
      double sum = 0.0;
      for (double e : v) sum += e;
      const double mean = sum / static_cast<double>(v.size());
      double ss = 0.0;
      for (double e : v) ss += (e - mean) * (e - mean);
      r.mean = mean;
      r.std = std::sqrt(ss / static_cast<double>(v.size() - 1));
      return r;
    }();
    const int k = schedule.k_for(n);
    double bound = std::numeric_limits<double>::quiet_NaN();
    try {
      bound = schedule.kind == KSchedule::Kind::power
                  ? theorem1_bound(k, static_cast<double>(n), problem.dim, constants_of(problem),
                                   options.delta)
                        .value
                  : theorem2_bound(static_cast<double>(n), problem.dim, schedule.beta,
                                   options.delta);
    } catch (const ParameterError&) {
      // Degenerate constants (e.g. a constant label function): no bound column.
    }
    result.sample_sizes.push_back(n);
    result.ks.push_back(k);
    result.mean_errors.push_back(stats.mean);
    result.std_errors.push_back(stats.std);
    result.bounds.push_back(bound);
    ns.push_back(static_cast<double>(n));
  }
  result.slope = log_log_slope(ns, result.mean_errors);
  return result;
}

CoverageResult bound_coverage(const SyntheticProblem& problem, std::size_t n, int k,
                              const Theorem1Constants& constants, double delta, int trials,
                              std::uint64_t seed, int workers) {
  if (trials < 1) throw ParameterError("coverage needs at least one trial");
  const Theorem1Bound bound =
      theorem1_bound(k, static_cast<double>(n), problem.dim, constants, delta);
  const Matrix grid = make_eval_grid(problem.dim, default_grid_per_axis(problem.dim));
  CoverageResult out;
  out.bound = bound.value;
  out.k_admissible = bound.k_admissible;
  out.errors.resize(static_cast<std::size_t>(trials));
  parallel_for(out.errors.size(), workers, [&](std::size_t t) {
    const Dataset sample =
        sample_dataset(problem, n, mix_seed(mix_seed(seed, streams::kTrial), t));
    out.errors[t] = sup_error_estimate(problem, sample, k, grid);
  });
  for (double e : out.errors) out.covered += e <= out.bound;
  return out;
}

std::string rate_csv(const RateResult& result) {
  std::string out = "n,mean_error,std_error,bound\n";
  for (std::size_t i = 0; i < result.sample_sizes.size(); ++i) {
    const double b = result.bounds[i];
    out += fmt::format("{},{},{},{}\n", result.sample_sizes[i], result.mean_errors[i],
                       result.std_errors[i], std::isfinite(b) ? fmt::format("{}", b) : "");
  }
  return out;
}

}  // namespace churnlab
