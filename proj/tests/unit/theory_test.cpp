#include "oracles.hpp"

#include "churnlab/error.hpp"
#include "churnlab/problem.hpp"
#include "churnlab/theory.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace churnlab;

TEST(UnitBallVolume, KnownValues) {
  EXPECT_NEAR(unit_ball_volume(1), 2.0, 1e-14);
  EXPECT_NEAR(unit_ball_volume(2), std::numbers::pi, 1e-14);
  EXPECT_NEAR(unit_ball_volume(3), 4.0 * std::numbers::pi / 3.0, 1e-14);
  EXPECT_THROW(unit_ball_volume(0), ParameterError);
}

TEST(Theorem1Bound, HandValues) {
  const Theorem1Constants unit{};
  const Theorem1Bound b = theorem1_bound(100, 1e4, 1, unit, 0.05);
  EXPECT_NEAR(b.bias_term, 0.01, 1e-15);
  EXPECT_NEAR(b.variance_term, 0.5214, 5e-5);
  EXPECT_NEAR(b.value, oracle::theorem1(100, 1e4, 1, 1, 1, 1, 1, 0.05), 1e-12);
  const Theorem1Bound b4 = theorem1_bound(400, 1e4, 1, unit, 0.05);
  EXPECT_NEAR(b4.value, 0.3007, 5e-5);
  EXPECT_NEAR(b4.bias_term, 0.04, 1e-15);
  // The admissible range is empty for these constants.
  EXPECT_NEAR(b.k_min, 256.0 * std::pow(std::log(80.0), 2) * std::log(1e4), 1e-6);
  EXPECT_GT(b.k_min, 4.5e4 - 500);
  EXPECT_DOUBLE_EQ(b.k_max, 1e4);
  EXPECT_FALSE(b.k_admissible);
}

TEST(Theorem1Bound, RejectsBadConstants) {
  Theorem1Constants c{};
  c.c_alpha = 0.0;
  EXPECT_THROW(theorem1_bound(10, 100, 1, c, 0.05), ParameterError);
  EXPECT_THROW(theorem1_bound(10, 100, 1, Theorem1Constants{}, 1.0), ParameterError);
  EXPECT_THROW(theorem1_bound(-1, 100, 1, Theorem1Constants{}, 0.5), ParameterError);
}

TEST(Theorem2Bound, HandValueAndShape) {
  EXPECT_NEAR(theorem2_bound(1e4, 2, 0.1, 0.05), 0.650, 1e-3);
  EXPECT_NEAR(theorem2_bound(1e4, 2, 0.1, 0.05), oracle::theorem2(1e4, 2, 0.1, 0.05), 1e-14);
  const double ratio = theorem2_bound(4e6, 2, 0.1, 0.05) / theorem2_bound(1e6, 2, 0.1, 0.05);
  EXPECT_NEAR(ratio, 0.5, 0.05);
  double previous = INFINITY;
  for (double beta = 0.05; beta < 1.0; beta += 0.05) {
    const double v = theorem2_bound(1e4, 2, beta, 0.05);
    EXPECT_LT(v, previous);
    previous = v;
  }
  EXPECT_THROW(theorem2_bound(1e4, 2, 1.0, 0.05), ParameterError);
  EXPECT_THROW(theorem2_bound(1e4, 2, 0.1, 0.0), ParameterError);
}

TEST(SupError, ConstantLabelFunctionWithSoftLabels) {
  const SyntheticProblem problem = SyntheticProblem::uniform_cube(1, parse_eta("constant:0.3"));
  Rng rng(3);
  Dataset sample;
  sample.features = problem.sample_points(50, rng);
  sample.labels = soft_eta_labels(problem, sample.features);
  sample.num_classes = 2;
  sample.classes.assign(50, 1);
  const Matrix grid = make_eval_grid(1, 64);
  for (int k : {1, 7, 50}) EXPECT_NEAR(sup_error_estimate(problem, sample, k, grid), 0.0, 1e-15);
  EXPECT_THROW(sup_error_estimate(problem, sample, 51, grid), ParameterError);
}

TEST(SupError, HandEnumeration) {
  const SyntheticProblem problem = SyntheticProblem::uniform_cube(1, parse_eta("linear"));
  Dataset sample;
  sample.features = Matrix(3, 1);
  sample.features << 0.1, 0.5, 0.9;
  sample.labels = soft_eta_labels(problem, sample.features);
  sample.num_classes = 2;
  Matrix grid(3, 1);
  grid << 0.0, 0.5, 1.0;
  EXPECT_NEAR(sup_error_estimate(problem, sample, 1, grid), 0.1, 1e-15);
}

TEST(SupError, LinearEtaHardLabelsIsSmallMostOfTheTime) {
  const SyntheticProblem problem = SyntheticProblem::uniform_cube(1, parse_eta("linear"));
  const Matrix grid = make_eval_grid(1, default_grid_per_axis(1));
  const int k = static_cast<int>(std::ceil(std::pow(1e4, 2.0 / 3.0)));
  int small = 0;
  for (std::uint64_t t = 0; t < 20; ++t) {
    small += sup_error_estimate(problem, sample_dataset(problem, 10000, 100 + t), k, grid) < 0.1;
  }
  EXPECT_GE(small, 18);
}

TEST(BetaSmoothed, ClosedFormExamples) {
  const SyntheticProblem linear = SyntheticProblem::uniform_cube(1, parse_eta("linear"));
  const SyntheticProblem square = SyntheticProblem::uniform_cube(1, parse_eta("quadratic"));
  EXPECT_NEAR(beta_smoothed_closed_form(0.5, 0.2, linear), 0.5, 1e-15);
  EXPECT_NEAR(beta_smoothed_closed_form(0.5, 0.2, square), 0.76 / 3.0, 1e-14);
  for (double x : {0.0, 0.3, 0.95}) {
    EXPECT_NEAR(beta_smoothed_closed_form(x, 1.0, square), 1.0 / 3.0, 1e-15);
  }
  // Near the boundary the interval is clipped, not shrunk.
  EXPECT_NEAR(beta_smoothed_closed_form(0.0, 0.2, linear), 0.1, 1e-15);
  EXPECT_THROW(beta_smoothed_closed_form(0.5, 0.0, linear), ParameterError);
  EXPECT_THROW(beta_smoothed_closed_form(0.5, 1.5, linear), ParameterError);
}

TEST(BetaSmoothed, MonteCarloAgreesWithClosedForm) {
  const SyntheticProblem sine = SyntheticProblem::uniform_cube(1, parse_eta("sine"));
  for (double x : {0.05, 0.4, 0.77}) {
    RowVector q(1);
    q << x;
    EXPECT_NEAR(beta_smoothed_monte_carlo(q, 0.1, sine, 200000, 9),
                beta_smoothed_closed_form(x, 0.1, sine), 0.01);
  }
}

TEST(KSchedule, Values) {
  KSchedule power;
  EXPECT_EQ(power.k_for(1000), 100);
  EXPECT_EQ(power.k_for(64000), 1600);
  KSchedule linear;
  linear.kind = KSchedule::Kind::linear;
  linear.beta = 0.1;
  EXPECT_EQ(linear.k_for(2000), 200);
  EXPECT_EQ(linear.k_for(5), 1);
}

TEST(RateExperiment, DeterministicAndValidated) {
  const SyntheticProblem problem = SyntheticProblem::uniform_cube(1, parse_eta("linear"));
  RateOptions options;
  options.grid_per_axis = 64;
  const RateResult a = rate_experiment(problem, KSchedule{}, {200, 800}, 3, 5, options);
  options.workers = 3;
  const RateResult b = rate_experiment(problem, KSchedule{}, {200, 800}, 3, 5, options);
  EXPECT_EQ(a.mean_errors, b.mean_errors);
  EXPECT_EQ(a.std_errors, b.std_errors);
  EXPECT_EQ(a.slope, b.slope);
  EXPECT_THROW(rate_experiment(problem, KSchedule{}, {200}, 3, 5), ParameterError);
  EXPECT_THROW(rate_experiment(problem, KSchedule{}, {800, 200}, 3, 5), ParameterError);
  EXPECT_THROW(rate_experiment(problem, KSchedule{}, {200, 800}, 2, 5), ParameterError);

  const std::string csv = rate_csv(a);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "n,mean_error,std_error,bound");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
}

TEST(RateExperiment, WholeSampleNeighbourhoodPlateaus) {
  // k = n averages every label: the error against eta tends to
  // sup |E eta - eta| = 0.5 for the linear label function.
  const SyntheticProblem problem = SyntheticProblem::uniform_cube(1, parse_eta("linear"));
  KSchedule all;
  all.kind = KSchedule::Kind::linear;
  all.beta = 1.0;
  const RateResult r = rate_experiment(problem, all, {1000, 4000, 16000}, 3, 8);
  for (double e : r.mean_errors) EXPECT_NEAR(e, 0.5, 0.03);
  EXPECT_NEAR(r.slope, 0.0, 0.05);
}

TEST(LogLogSlope, ExactPowerLaw) {
  const std::vector<double> x{1, 10, 100}, y{2, 0.2, 0.02};
  EXPECT_NEAR(log_log_slope(x, y), -1.0, 1e-12);
  const std::vector<double> bad{1, 0, 3};
  EXPECT_THROW(log_log_slope(x, bad), NumericError);
}

TEST(EvalGrid, ShapeAndCorners) {
  const Matrix g = make_eval_grid(2, 3);
  ASSERT_EQ(g.rows(), 9);
  EXPECT_EQ(g.row(0), RowVector::Zero(2));
  EXPECT_EQ(g.row(8), RowVector::Ones(2));
  EXPECT_EQ(make_eval_grid(3, default_grid_per_axis(3)).rows(), 512);
}

TEST(Problem, EtaConstantsAndEncoding) {
  EXPECT_NEAR(parse_eta("sine").c_alpha(4), std::numbers::pi / 2.0, 1e-15);
  EXPECT_THROW(parse_eta("cubic"), ParameterError);
  EXPECT_THROW(parse_eta("constant:1.5"), ParameterError);
  const auto [data, problem] = gen_smooth_problem(2000, 3, parse_eta("sine"), 4);
  EXPECT_EQ(data.class_names, (std::vector<std::string>{"1", "0"}));
  EXPECT_DOUBLE_EQ(problem.omega, 0.125);
  for (Eigen::Index i = 0; i < data.features.rows(); ++i) {
    const double eta = problem.eta(data.features.row(i));
    EXPECT_GE(eta, 0.0);
    EXPECT_LE(eta, 1.0);
  }
  const auto [again, unused] = gen_smooth_problem(2000, 3, parse_eta("sine"), 4);
  EXPECT_TRUE(identical(data, again));
}

TEST(Problem, ConstantHalfGivesBalancedLabels) {
  const std::size_t n = 4000;
  const auto [data, problem] = gen_smooth_problem(n, 2, parse_eta("constant:0.5"), 12);
  double ones = 0;
  for (int c : data.classes) ones += c == 0;
  EXPECT_NEAR(ones / n, 0.5, 3.0 / std::sqrt(static_cast<double>(n)));
}
