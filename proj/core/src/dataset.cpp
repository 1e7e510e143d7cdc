#include "churnlab/dataset.hpp"

#include "churnlab/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cstring>
#include <unordered_map>

namespace churnlab {

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  Dataset out;
  out.name = name;
  out.num_classes = num_classes;
  out.seed = seed;
  out.class_names = class_names;
  out.features.resize(static_cast<Eigen::Index>(rows.size()), features.cols());
  out.labels.resize(static_cast<Eigen::Index>(rows.size()), labels.cols());
  out.classes.resize(rows.size());
  std::unordered_map<std::size_t, std::size_t> position;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::size_t r = rows[i];
    if (r >= size()) throw ShapeError(fmt::format("row {} outside a dataset of {}", r, size()));
    const auto src = static_cast<Eigen::Index>(r);
    const auto dst = static_cast<Eigen::Index>(i);
    out.features.row(dst) = features.row(src);
    out.labels.row(dst) = labels.row(src);
    out.classes[i] = classes[r];
    position.emplace(r, i);
  }
  for (std::size_t noisy : noisy_indices) {
    if (auto it = position.find(noisy); it != position.end()) {
      out.noisy_indices.push_back(it->second);
    }
  }
  std::sort(out.noisy_indices.begin(), out.noisy_indices.end());
  return out;
}

void validate(const Dataset& data) {
  const auto n = data.features.rows();
  if (n < 1 || data.features.cols() < 1) throw ConfigError("dataset is empty");
  if (data.num_classes < 2) throw ConfigError("dataset needs at least two classes");
  if (data.labels.rows() != n || data.labels.cols() != data.num_classes ||
      static_cast<Eigen::Index>(data.classes.size()) != n) {
    throw ShapeError(fmt::format("dataset shapes disagree: {} feature rows, {}x{} labels, {} classes",
                                 n, data.labels.rows(), data.labels.cols(), data.classes.size()));
  }
  if (!data.class_names.empty() &&
      static_cast<int>(data.class_names.size()) != data.num_classes) {
    throw ShapeError("one class name per class expected");
  }
  if (!all_finite(data.features)) throw NumericError("dataset features contain NaN or Inf");
  require_simplex_rows(data.labels, "dataset label");
  for (Eigen::Index i = 0; i < n; ++i) {
    const int c = data.classes[static_cast<std::size_t>(i)];
    if (c < 0 || c >= data.num_classes) {
      throw ShapeError(fmt::format("class {} at row {} outside [0, {})", c, i, data.num_classes));
    }
    const auto row = data.labels.row(i);
    const bool hard = (row.array() == 0.0 || row.array() == 1.0).all();
    if (hard && row[c] != 1.0) {
      throw ConfigError(fmt::format("one-hot label at row {} disagrees with class {}", i, c));
    }
  }
  for (std::size_t r : data.noisy_indices) {
    if (r >= data.size()) throw ShapeError("noisy index outside the dataset");
  }
}

namespace {

bool same_bits(const Matrix& a, const Matrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         (a.size() == 0 ||
          std::memcmp(a.data(), b.data(), sizeof(double) * static_cast<std::size_t>(a.size())) == 0);
}

}  // namespace

bool identical(const Dataset& a, const Dataset& b) {
  return a.name == b.name && a.num_classes == b.num_classes && a.seed == b.seed &&
         a.class_names == b.class_names && a.classes == b.classes &&
         a.noisy_indices == b.noisy_indices && same_bits(a.features, b.features) &&
         same_bits(a.labels, b.labels);
}

}  // namespace churnlab
