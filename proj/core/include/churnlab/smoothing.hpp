#pragma once

#include "churnlab/dataset.hpp"
#include "churnlab/trainer.hpp"
#include "churnlab/types.hpp"

namespace churnlab {

// a weights the smoothed part against the original label, b weights the
// uniform label against the k-NN label.
struct SmoothingParams {
  double a = 1.0;
  double b = 0.0;
  int k = 10;
};

void validate(const SmoothingParams& params);

// (1 - a) y + (a / L) 1. Throws ParameterError unless 0 <= a <= 1.
SoftLabel global_label_smooth(const Eigen::Ref<const SoftLabel>& y, double a);

// (1 - a) y + a (b / L 1 + (1 - b) eta_k).
SoftLabel knn_smooth_label(const Eigen::Ref<const SoftLabel>& y,
                           const Eigen::Ref<const SoftLabel>& eta_k, double a, double b);

Matrix global_label_smooth_rows(const Matrix& labels, double a);

// k-NN smoothed label of every row, with neighbors searched among the rows
// of `embeddings` (each row is its own neighbor at distance 0).
Matrix knn_smooth_labels(const Matrix& embeddings, const Matrix& labels,
                         const SmoothingParams& params);

struct KnnPipelineConfig {
  TrainConfig phase_one;  // trains M0 on the original labels
  TrainConfig phase_two;  // trains the returned model on the smoothed labels
};

struct KnnPipelineResult {
  TrainedModel model;
  Matrix smoothed_labels;
  Matrix phase_one_logits;
};

// Train M0 with plain cross-entropy, embed every training point by its M0
// logits, replace each label by its k-NN smoothed label in that space, and
// train the final model on the smoothed labels.
KnnPipelineResult deep_knn_pipeline(const Dataset& data, const KnnPipelineConfig& config,
                                    const SmoothingParams& smoothing);

}  // namespace churnlab
