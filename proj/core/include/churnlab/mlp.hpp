#pragma once

#include "churnlab/types.hpp"

#include <cstdint>
#include <vector>

namespace churnlab {

// Weights and biases of a fully connected ReLU network.
//
// Layer l maps a row vector of width layer_sizes[l] to width
// layer_sizes[l + 1]: h' = h * weights[l] + biases[l]^T. ReLU follows every
// layer except the last, whose outputs are the logits.
struct MlpParams {
  std::vector<int> layer_sizes;
  std::vector<Matrix> weights;  // weights[l]: layer_sizes[l] x layer_sizes[l+1]
  std::vector<Vector> biases;   // biases[l]: layer_sizes[l+1]
  std::uint64_t seed = 0;

  int input_dim() const { return layer_sizes.front(); }
  int output_dim() const { return layer_sizes.back(); }
  int num_layers() const { return static_cast<int>(weights.size()); }
  std::size_t num_parameters() const;

  // Bitwise equality of every weight and bias (and the architecture).
  bool operator==(const MlpParams& other) const;
};

// Same shapes as MlpParams; holds gradients or optimizer moments.
struct MlpGradients {
  std::vector<Matrix> weights;
  std::vector<Vector> biases;

  static MlpGradients zeros_like(const MlpParams& params);
  MlpGradients& operator+=(const MlpGradients& other);
};

// Glorot-uniform weights, zero biases. Fully determined by (layer_sizes, seed).
// Throws ConfigError unless there are >= 2 sizes, all >= 1.
MlpParams init_mlp(const std::vector<int>& layer_sizes, std::uint64_t seed);

// Checks shapes and finiteness; throws ShapeError / NumericError.
void validate(const MlpParams& params);

// Logits for every row of `features`. Throws ShapeError on width mismatch.
Matrix forward_logits(const MlpParams& params, const Matrix& features);

// Intermediate activations kept for the backward pass. inputs[l] is the
// input to layer l (inputs[0] is the feature batch; later entries are
// post-ReLU hidden activations).
struct ForwardTrace {
  std::vector<Matrix> inputs;
  Matrix logits;
};

ForwardTrace forward_trace(const MlpParams& params, const Matrix& features);

// Reverse-mode pass: given dLoss/dLogits (m x L), returns dLoss/dParams.
MlpGradients backward(const MlpParams& params, const ForwardTrace& trace,
                      const Matrix& logit_grad);

// Flat views over all parameters in a fixed order (layer by layer, weights
// row-major then biases). Used by gradient checks and diagnostics.
Vector flatten(const MlpParams& params);
Vector flatten(const MlpGradients& grads);
void assign_flat(MlpParams& params, const Vector& flat);

}  // namespace churnlab
