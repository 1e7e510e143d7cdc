#include "churnlab/mlp.hpp"

#include "churnlab/error.hpp"
#include "churnlab/random.hpp"

#include <cmath>
#include <cstring>
#include <string>

namespace churnlab {

namespace {

bool same_bits(const double* a, const double* b, Eigen::Index n) {
  return n == 0 || std::memcmp(a, b, static_cast<std::size_t>(n) * sizeof(double)) == 0;
}

void check_input(const MlpParams& params, const Matrix& features) {
  if (params.weights.empty()) throw ShapeError("network has no layers");
  if (features.cols() != params.input_dim()) {
    throw ShapeError("feature width " + std::to_string(features.cols()) +
                     " does not match network input " + std::to_string(params.input_dim()));
  }
}

}  // namespace

std::size_t MlpParams::num_parameters() const {
  std::size_t total = 0;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    total += static_cast<std::size_t>(weights[l].size() + biases[l].size());
  }
  return total;
}

bool MlpParams::operator==(const MlpParams& other) const {
  if (layer_sizes != other.layer_sizes || weights.size() != other.weights.size()) return false;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    if (weights[l].rows() != other.weights[l].rows() ||
        weights[l].cols() != other.weights[l].cols() ||
        biases[l].size() != other.biases[l].size()) {
      return false;
    }
    if (!same_bits(weights[l].data(), other.weights[l].data(), weights[l].size()) ||
        !same_bits(biases[l].data(), other.biases[l].data(), biases[l].size())) {
      return false;
    }
  }
  return true;
}

MlpGradients MlpGradients::zeros_like(const MlpParams& params) {
  MlpGradients g;
  for (std::size_t l = 0; l < params.weights.size(); ++l) {
    g.weights.push_back(Matrix::Zero(params.weights[l].rows(), params.weights[l].cols()));
    g.biases.push_back(Vector::Zero(params.biases[l].size()));
  }
  return g;
}

MlpGradients& MlpGradients::operator+=(const MlpGradients& other) {
  for (std::size_t l = 0; l < weights.size(); ++l) {
    weights[l] += other.weights[l];
    biases[l] += other.biases[l];
  }
  return *this;
}

MlpParams init_mlp(const std::vector<int>& layer_sizes, std::uint64_t seed) {
  if (layer_sizes.size() < 2) throw ConfigError("an MLP needs at least an input and an output size");
  for (int s : layer_sizes) {
    if (s < 1) throw ConfigError("layer sizes must be positive");
  }
  MlpParams params;
  params.layer_sizes = layer_sizes;
  params.seed = seed;
  Rng rng(seed);
  for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
    const int fan_in = layer_sizes[l];
    const int fan_out = layer_sizes[l + 1];
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    std::uniform_real_distribution<double> dist(-limit, limit);
    Matrix w(fan_in, fan_out);
    for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = dist(rng);
    params.weights.push_back(std::move(w));
    params.biases.push_back(Vector::Zero(fan_out));
  }
  return params;
}

void validate(const MlpParams& params) {
  if (params.layer_sizes.size() < 2 || params.weights.size() + 1 != params.layer_sizes.size() ||
      params.biases.size() != params.weights.size()) {
    throw ShapeError("layer count does not match layer_sizes");
  }
  for (std::size_t l = 0; l < params.weights.size(); ++l) {
    if (params.weights[l].rows() != params.layer_sizes[l] ||
        params.weights[l].cols() != params.layer_sizes[l + 1] ||
        params.biases[l].size() != params.layer_sizes[l + 1]) {
      throw ShapeError("layer " + std::to_string(l) + " has inconsistent shape");
    }
    if (!params.weights[l].allFinite() || !params.biases[l].allFinite()) {
      throw NumericError("layer " + std::to_string(l) + " has non-finite parameters");
    }
  }
}

ForwardTrace forward_trace(const MlpParams& params, const Matrix& features) {
  check_input(params, features);
  ForwardTrace trace;
  trace.inputs.reserve(params.weights.size());
  trace.inputs.push_back(features);
  const int last = params.num_layers() - 1;
  for (int l = 0; l <= last; ++l) {
    Matrix z = trace.inputs.back() * params.weights[l];
    z.rowwise() += params.biases[l].transpose();
    if (l == last) {
      trace.logits = std::move(z);
    } else {
      trace.inputs.push_back(z.cwiseMax(0.0));
    }
  }
  return trace;
}

Matrix forward_logits(const MlpParams& params, const Matrix& features) {
  check_input(params, features);
  Matrix h = features;
  const int last = params.num_layers() - 1;
  for (int l = 0; l <= last; ++l) {
    Matrix z = h * params.weights[l];
    z.rowwise() += params.biases[l].transpose();
    h = (l == last) ? std::move(z) : Matrix(z.cwiseMax(0.0));
  }
  return h;
}

MlpGradients backward(const MlpParams& params, const ForwardTrace& trace,
                      const Matrix& logit_grad) {
  if (logit_grad.rows() != trace.logits.rows() || logit_grad.cols() != trace.logits.cols()) {
    throw ShapeError("logit gradient shape does not match the forward pass");
  }
  MlpGradients grads = MlpGradients::zeros_like(params);
  Matrix delta = logit_grad;
  for (int l = params.num_layers() - 1; l >= 0; --l) {
    const Matrix& input = trace.inputs[static_cast<std::size_t>(l)];
    grads.weights[l].noalias() = input.transpose() * delta;
    grads.biases[l] = delta.colwise().sum().transpose();
    if (l > 0) {
      Matrix upstream = delta * params.weights[l].transpose();
      // ReLU passes gradient only where its output was positive.
      delta = upstream.cwiseProduct((input.array() > 0.0).cast<double>().matrix());
    }
  }
  return grads;
}

Vector flatten(const MlpParams& params) {
  Vector flat(static_cast<Eigen::Index>(params.num_parameters()));
  Eigen::Index pos = 0;
  for (std::size_t l = 0; l < params.weights.size(); ++l) {
    const auto& w = params.weights[l];
    const auto& b = params.biases[l];
    flat.segment(pos, w.size()) = Eigen::Map<const Vector>(w.data(), w.size());
    pos += w.size();
    flat.segment(pos, b.size()) = b;
    pos += b.size();
  }
  return flat;
}

Vector flatten(const MlpGradients& grads) {
  Eigen::Index total = 0;
  for (std::size_t l = 0; l < grads.weights.size(); ++l) {
    total += grads.weights[l].size() + grads.biases[l].size();
  }
  Vector flat(total);
  Eigen::Index pos = 0;
  for (std::size_t l = 0; l < grads.weights.size(); ++l) {
    const auto& w = grads.weights[l];
    const auto& b = grads.biases[l];
    flat.segment(pos, w.size()) = Eigen::Map<const Vector>(w.data(), w.size());
    pos += w.size();
    flat.segment(pos, b.size()) = b;
    pos += b.size();
  }
  return flat;
}

void assign_flat(MlpParams& params, const Vector& flat) {
  if (flat.size() != static_cast<Eigen::Index>(params.num_parameters())) {
    throw ShapeError("flat parameter vector has the wrong length");
  }
  Eigen::Index pos = 0;
  for (std::size_t l = 0; l < params.weights.size(); ++l) {
    auto& w = params.weights[l];
    auto& b = params.biases[l];
    Eigen::Map<Vector>(w.data(), w.size()) = flat.segment(pos, w.size());
    pos += w.size();
    b = flat.segment(pos, b.size());
    pos += b.size();
  }
}

}  // namespace churnlab
