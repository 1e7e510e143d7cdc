#pragma once

#include "churnlab/types.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace churnlab {

// Features plus per-example labels. `labels` holds one soft label per row
// (one-hot unless a smoothing method rewrote it); `classes` holds the hard
// class indices the labels were built from.
struct Dataset {
  std::string name;
  Matrix features;                       // n x D
  std::vector<int> classes;              // n hard labels in [0, num_classes)
  Matrix labels;                         // n x num_classes soft labels
  int num_classes = 0;
  std::uint64_t seed = 0;                // generator seed, 0 for loaded data
  std::vector<std::string> class_names;  // class index -> name
  std::vector<std::size_t> noisy_indices;  // rows whose label was flipped by a generator

  std::size_t size() const { return static_cast<std::size_t>(features.rows()); }
  int dim() const { return static_cast<int>(features.cols()); }

  // Rows in the given order; noisy_indices is remapped to the new positions.
  Dataset subset(std::span<const std::size_t> rows) const;
};

// Throws ConfigError / ShapeError / NumericError if the invariants fail:
// n >= 1, consistent shapes, finite features, simplex labels, and
// one-hot labels agreeing with `classes` where they are one-hot.
void validate(const Dataset& data);

// Bitwise comparison of every field.
bool identical(const Dataset& a, const Dataset& b);

}  // namespace churnlab
