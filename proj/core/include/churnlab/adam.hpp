#pragma once

#include "churnlab/mlp.hpp"

#include <cstdint>
#include <span>

namespace churnlab {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  AdamConfig config;
  MlpGradients first_moment;
  MlpGradients second_moment;
  std::int64_t step_count = 0;

  static AdamState for_params(const MlpParams& params, const AdamConfig& config = {});
};

// One bias-corrected Adam update on flat buffers. `step` is the 1-based
// index of this update. All spans must have equal length.
void adam_update(std::span<double> params, std::span<const double> grads,
                 std::span<double> first_moment, std::span<double> second_moment,
                 std::int64_t step, const AdamConfig& config);

// Applies one update to every tensor of `params` and increments step_count.
void adam_update(MlpParams& params, AdamState& state, const MlpGradients& grads);

}  // namespace churnlab
