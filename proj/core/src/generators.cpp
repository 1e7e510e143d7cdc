#include "churnlab/generators.hpp"

#include "churnlab/error.hpp"
#include "churnlab/random.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace churnlab {

Dataset gen_two_gaussians(std::size_t n, double flip_fraction, std::uint64_t seed) {
  if (n < 2 || n % 2 != 0) throw ParameterError(fmt::format("n = {} must be even and >= 2", n));
  if (!(flip_fraction >= 0.0 && flip_fraction < 1.0)) {
    throw ParameterError(fmt::format("flip fraction {} outside [0, 1)", flip_fraction));
  }
  Rng rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  Dataset data;
  data.name = "two_gaussians";
  data.seed = seed;
  data.num_classes = 2;
  data.class_names = {"0", "1"};
  data.features.resize(static_cast<Eigen::Index>(n), 2);
  data.classes.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const bool positive = i < n / 2;
    const double centre = positive ? -2.0 : 2.0;
    const auto r = static_cast<Eigen::Index>(i);
    data.features(r, 0) = centre + noise(rng);
    data.features(r, 1) = centre + noise(rng);
    data.classes[i] = positive ? 1 : 0;
  }

  const auto flips = static_cast<std::size_t>(std::floor(flip_fraction * static_cast<double>(n) + 1e-9));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  // Partial Fisher-Yates: the first `flips` slots are a uniform sample.
  for (std::size_t i = 0; i < flips; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(order[i], order[pick(rng)]);
  }
  data.noisy_indices.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(flips));
  std::sort(data.noisy_indices.begin(), data.noisy_indices.end());
  for (std::size_t r : data.noisy_indices) data.classes[r] = 1 - data.classes[r];
  data.labels = one_hot_matrix(data.classes, 2);
  return data;
}

std::pair<Dataset, Dataset> split(const Dataset& data, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw ParameterError(fmt::format("test fraction {} outside (0, 1)", test_fraction));
  }
  const std::size_t n = data.size();
  const auto n_test = static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(n)));
  if (n_test == 0 || n_test >= n) {
    throw ParameterError(fmt::format("split of {} rows at {} leaves an empty side", n, test_fraction));
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::size_t> test(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_test));
  std::vector<std::size_t> train(order.begin() + static_cast<std::ptrdiff_t>(n_test), order.end());
  std::sort(test.begin(), test.end());
  std::sort(train.begin(), train.end());
  Dataset tr = data.subset(train);
  Dataset te = data.subset(test);
  tr.name = data.name + "/train";
  te.name = data.name + "/test";
  return {std::move(tr), std::move(te)};
}

}  // namespace churnlab
