#include "churnlab/adam.hpp"

#include "churnlab/error.hpp"

#include <cmath>

namespace churnlab {

AdamState AdamState::for_params(const MlpParams& params, const AdamConfig& config) {
  AdamState state;
  state.config = config;
  state.first_moment = MlpGradients::zeros_like(params);
  state.second_moment = MlpGradients::zeros_like(params);
  return state;
}

void adam_update(std::span<double> params, std::span<const double> grads,
                 std::span<double> first_moment, std::span<double> second_moment,
                 std::int64_t step, const AdamConfig& config) {
  if (grads.size() != params.size() || first_moment.size() != params.size() ||
      second_moment.size() != params.size()) {
    throw ShapeError("adam_update: buffer sizes differ");
  }
  if (step < 1) throw ParameterError("adam_update: step must be >= 1");
  const double t = static_cast<double>(step);
  const double correction1 = 1.0 - std::pow(config.beta1, t);
  const double correction2 = 1.0 - std::pow(config.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    first_moment[i] = config.beta1 * first_moment[i] + (1.0 - config.beta1) * g;
    second_moment[i] = config.beta2 * second_moment[i] + (1.0 - config.beta2) * g * g;
    const double m_hat = first_moment[i] / correction1;
    const double v_hat = second_moment[i] / correction2;
    params[i] -= config.lr * m_hat / (std::sqrt(v_hat) + config.eps);
  }
}

void adam_update(MlpParams& params, AdamState& state, const MlpGradients& grads) {
  if (state.first_moment.weights.size() != params.weights.size() ||
      grads.weights.size() != params.weights.size()) {
    throw ShapeError("adam_update: optimizer state does not match the network");
  }
  const std::int64_t step = state.step_count + 1;
  auto span_of = [](auto& m) { return std::span(m.data(), static_cast<std::size_t>(m.size())); };
  for (std::size_t l = 0; l < params.weights.size(); ++l) {
    if (grads.weights[l].size() != params.weights[l].size() ||
        grads.biases[l].size() != params.biases[l].size()) {
      throw ShapeError("adam_update: gradient does not match the network");
    }
    adam_update(span_of(params.weights[l]), span_of(grads.weights[l]),
                span_of(state.first_moment.weights[l]), span_of(state.second_moment.weights[l]),
                step, state.config);
    adam_update(span_of(params.biases[l]), span_of(grads.biases[l]),
                span_of(state.first_moment.biases[l]), span_of(state.second_moment.biases[l]),
                step, state.config);
  }
  state.step_count = step;
}

}  // namespace churnlab
