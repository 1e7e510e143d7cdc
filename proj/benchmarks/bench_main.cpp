#include "churnlab/adam.hpp"
#include "churnlab/generators.hpp"
#include "churnlab/knn.hpp"
#include "churnlab/mlp.hpp"
#include "churnlab/random.hpp"
#include "churnlab/smoothing.hpp"
#include "churnlab/theory.hpp"
#include "churnlab/trainer.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

using namespace churnlab;

namespace {

Matrix uniform_points(std::size_t n, int dim, std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix m(static_cast<Eigen::Index>(n), dim);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = u(rng);
  return m;
}

// Grid queries against n points: linear scan in 2-D, sorted index in 1-D.
void BM_KnnLabelsScan(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Matrix points = uniform_points(n, 2, 1);
  const Matrix labels = Matrix::Constant(static_cast<Eigen::Index>(n), 2, 0.5);
  const Matrix grid = make_eval_grid(2, 16);
  const int k = static_cast<int>(std::ceil(std::pow(static_cast<double>(n), 2.0 / 3.0)));
  for (auto _ : state) benchmark::DoNotOptimize(knn_labels(grid, points, labels, k));
  state.SetItemsProcessed(state.iterations() * grid.rows());
}
BENCHMARK(BM_KnnLabelsScan)->RangeMultiplier(4)->Range(1 << 10, 1 << 14);

void BM_KnnLabelsLine(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Matrix points = uniform_points(n, 1, 1);
  const Matrix labels = Matrix::Constant(static_cast<Eigen::Index>(n), 2, 0.5);
  const Matrix grid = make_eval_grid(1, 256);
  const int k = static_cast<int>(std::ceil(std::pow(static_cast<double>(n), 2.0 / 3.0)));
  for (auto _ : state) benchmark::DoNotOptimize(knn_labels(grid, points, labels, k));
  state.SetItemsProcessed(state.iterations() * grid.rows());
}
BENCHMARK(BM_KnnLabelsLine)->RangeMultiplier(4)->Range(1 << 10, 1 << 16);

// Phase two of k-NN smoothing: every training row queries the rest.
void BM_KnnSmoothLabels(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Dataset d = gen_two_gaussians(n, 0.1, 3);
  const SmoothingParams params{1.0, 0.5, 10};
  for (auto _ : state) benchmark::DoNotOptimize(knn_smooth_labels(d.features, d.labels, params));
}
BENCHMARK(BM_KnnSmoothLabels)->Arg(500)->Arg(2000);

void BM_TrainStep(benchmark::State& state) {
  const int width = static_cast<int>(state.range(0));
  const Dataset d = gen_two_gaussians(128, 0.1, 5);
  MlpParams params = init_mlp({2, width, width, 2}, 7);
  AdamState adam = AdamState::for_params(params);
  Batch batch{d.features, d.labels};
  const LossSpec loss = CrossEntropyLoss{};
  for (auto _ : state) benchmark::DoNotOptimize(train_step(params, adam, batch, loss));
  state.SetItemsProcessed(state.iterations() * 128);
}
BENCHMARK(BM_TrainStep)->Arg(32)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
