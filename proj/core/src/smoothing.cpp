#include "churnlab/smoothing.hpp"

#include "churnlab/error.hpp"
#include "churnlab/knn.hpp"
#include "churnlab/random.hpp"

#include <fmt/format.h>

namespace churnlab {

namespace {

void check_unit(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw ParameterError(fmt::format("{} = {} outside [0, 1]", name, v));
  }
}

}  // namespace

void validate(const SmoothingParams& params) {
  check_unit(params.a, "a");
  check_unit(params.b, "b");
  if (params.k < 1) throw ParameterError(fmt::format("k = {} must be >= 1", params.k));
}

SoftLabel global_label_smooth(const Eigen::Ref<const SoftLabel>& y, double a) {
  check_unit(a, "a");
  require_simplex(y, "label");
  const double L = static_cast<double>(y.size());
  return (1.0 - a) * y.array() + a / L;
}

SoftLabel knn_smooth_label(const Eigen::Ref<const SoftLabel>& y,
                           const Eigen::Ref<const SoftLabel>& eta_k, double a, double b) {
  check_unit(a, "a");
  check_unit(b, "b");
  if (y.size() != eta_k.size()) throw ShapeError("label and k-NN label differ in length");
  require_simplex(y, "label");
  require_simplex(eta_k, "k-NN label");
  const double uniform = 1.0 / static_cast<double>(y.size());
  SoftLabel out(y.size());
  for (Eigen::Index j = 0; j < y.size(); ++j) {
    out[j] = (1.0 - a) * y[j] + a * (b * uniform + (1.0 - b) * eta_k[j]);
  }
  return out;
}

Matrix global_label_smooth_rows(const Matrix& labels, double a) {
  Matrix out(labels.rows(), labels.cols());
  for (Eigen::Index i = 0; i < labels.rows(); ++i) {
    out.row(i) = global_label_smooth(labels.row(i).transpose(), a).transpose();
  }
  return out;
}

Matrix knn_smooth_labels(const Matrix& embeddings, const Matrix& labels,
                         const SmoothingParams& params) {
  validate(params);
  if (params.k > embeddings.rows()) {
    throw ParameterError(fmt::format("k = {} exceeds the {} training points", params.k,
                                     embeddings.rows()));
  }
  const Matrix eta = knn_labels(embeddings, embeddings, labels, params.k);
  Matrix out(labels.rows(), labels.cols());
  for (Eigen::Index i = 0; i < labels.rows(); ++i) {
    out.row(i) =
        knn_smooth_label(labels.row(i).transpose(), eta.row(i).transpose(), params.a, params.b)
            .transpose();
  }
  return out;
}

KnnPipelineResult deep_knn_pipeline(const Dataset& data, const KnnPipelineConfig& config,
                                    const SmoothingParams& smoothing) {
  validate(smoothing);
  if (static_cast<std::size_t>(smoothing.k) > data.size()) {
    throw ParameterError(fmt::format("k = {} exceeds the {} training points", smoothing.k,
                                     data.size()));
  }
  TrainConfig first = config.phase_one;
  first.loss = CrossEntropyLoss{};
  first.mixup_alpha.reset();
  const TrainedModel m0 = train(data.features, data.labels, first);

  KnnPipelineResult result;
  result.phase_one_logits = forward_logits(m0.params, data.features);
  result.smoothed_labels = knn_smooth_labels(result.phase_one_logits, data.labels, smoothing);
  result.model = train(data.features, result.smoothed_labels, config.phase_two);
  return result;
}

}  // namespace churnlab
