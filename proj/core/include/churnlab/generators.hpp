#pragma once

#include "churnlab/dataset.hpp"

#include <cstdint>
#include <utility>

namespace churnlab {

// Two-class mixture in 2-D: n/2 positives (class 1) from N((-2,-2), I) and
// n/2 negatives (class 0) from N((2,2), I); exactly floor(flip_fraction * n)
// rows, chosen uniformly without replacement, get the other class. The
// flipped rows are listed in noisy_indices.
// Throws ParameterError unless n >= 2 is even and 0 <= flip_fraction < 1.
Dataset gen_two_gaussians(std::size_t n, double flip_fraction, std::uint64_t seed);

// Seeded random partition; the test side gets round(test_fraction * n) rows.
// Throws ParameterError unless 0 < test_fraction < 1 and both sides are non-empty.
std::pair<Dataset, Dataset> split(const Dataset& data, double test_fraction,
                                  std::uint64_t seed);

}  // namespace churnlab
