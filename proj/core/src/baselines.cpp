#include "churnlab/baselines.hpp"

#include "churnlab/error.hpp"
#include "churnlab/losses.hpp"

#include <fmt/format.h>

#include <cmath>

namespace churnlab {

SoftLabel anchor_labels(const Eigen::Ref<const SoftLabel>& y,
                        const Eigen::Ref<const SoftLabel>& prelim_probs, double a) {
  if (!(a >= 0.0 && a <= 1.0)) throw ParameterError(fmt::format("anchor a = {} outside [0, 1]", a));
  if (y.size() != prelim_probs.size()) throw ShapeError("label and prediction differ in length");
  require_simplex(y, "label");
  require_simplex(prelim_probs, "preliminary prediction");
  return (1.0 - a) * y + a * prelim_probs;
}

Matrix anchor_label_rows(const Matrix& labels, const Matrix& prelim_probs, double a) {
  if (labels.rows() != prelim_probs.rows()) throw ShapeError("labels and predictions differ in length");
  Matrix out(labels.rows(), labels.cols());
  for (Eigen::Index i = 0; i < labels.rows(); ++i) {
    out.row(i) =
        anchor_labels(labels.row(i).transpose(), prelim_probs.row(i).transpose(), a).transpose();
  }
  return out;
}

Batch mixup_batch(const Batch& batch, std::span<const double> lambdas,
                  std::span<const std::size_t> partners) {
  const auto m = static_cast<std::size_t>(batch.features.rows());
  if (lambdas.size() != m || partners.size() != m) {
    throw ShapeError("mixup needs one weight and one partner per row");
  }
  Batch out{Matrix(batch.features.rows(), batch.features.cols()),
            Matrix(batch.targets.rows(), batch.targets.cols())};
  for (std::size_t i = 0; i < m; ++i) {
    const double lam = lambdas[i];
    if (!(lam >= 0.0 && lam <= 1.0)) throw ParameterError("mixup weight outside [0, 1]");
    if (partners[i] >= m) throw ShapeError("mixup partner index out of range");
    const auto r = static_cast<Eigen::Index>(i);
    const auto q = static_cast<Eigen::Index>(partners[i]);
    out.features.row(r) = lam * batch.features.row(r) + (1.0 - lam) * batch.features.row(q);
    out.targets.row(r) = lam * batch.targets.row(r) + (1.0 - lam) * batch.targets.row(q);
  }
  return out;
}

Batch mixup_batch(const Batch& batch, double a, Rng& rng) {
  if (!(a > 0.0) || !std::isfinite(a)) throw ParameterError(fmt::format("mixup a = {} must be > 0", a));
  const auto m = static_cast<std::size_t>(batch.features.rows());
  if (m < 2) throw ParameterError("mixup needs a batch of at least two rows");
  std::vector<double> lambdas(m);
  std::vector<std::size_t> partners(m);
  std::uniform_int_distribution<std::size_t> pick(0, m - 1);
  for (std::size_t i = 0; i < m; ++i) {
    lambdas[i] = sample_beta(a, a, rng);
    partners[i] = pick(rng);
  }
  return mixup_batch(batch, lambdas, partners);
}

PsiType parse_psi(const std::string& name) {
  if (name == "ce" || name == "cross_entropy") return PsiType::cross_entropy;
  if (name == "kl") return PsiType::kl;
  throw ParameterError(fmt::format("unknown divergence '{}' (expected ce or kl)", name));
}

std::string to_string(PsiType psi) { return psi == PsiType::kl ? "kl" : "ce"; }

double divergence(const Matrix& probs1, const Matrix& probs2, PsiType psi) {
  if (probs1.rows() != probs2.rows() || probs1.cols() != probs2.cols()) {
    throw ShapeError("divergence: prediction shapes differ");
  }
  if (probs1.rows() == 0) throw ShapeError("divergence: empty batch");
  double total = 0.0;
  for (Eigen::Index i = 0; i < probs1.rows(); ++i) {
    for (Eigen::Index j = 0; j < probs1.cols(); ++j) {
      const double p = probs1(i, j);
      const double log_q = std::log(std::max(probs2(i, j), kLogClamp));
      if (psi == PsiType::kl) {
        total += p * (std::log(std::max(p, kLogClamp)) - log_q);
      } else {
        total -= p * log_q;
      }
    }
  }
  return total / static_cast<double>(probs1.rows());
}

double codistill_loss(const Matrix& probs1, const Matrix& probs2, const Matrix& targets,
                      double a, PsiType psi, std::int64_t step, std::int64_t n_warm) {
  if (!(a >= 0.0)) throw ParameterError("co-distillation a must be >= 0");
  if (n_warm < 0) throw ParameterError("co-distillation n_warm must be >= 0");
  double loss = soft_cross_entropy(probs1, targets) + soft_cross_entropy(probs2, targets);
  if (step >= n_warm) loss += a * divergence(probs1, probs2, psi);
  return loss;
}

void validate(const CodistillSpec& spec) {
  if (!(spec.a >= 0.0) || !std::isfinite(spec.a)) throw ParameterError("co-distillation a must be >= 0");
  if (spec.n_warm < 0) throw ParameterError("co-distillation n_warm must be >= 0");
}

CodistillLossAndGrad codistill_loss_and_grad(const Matrix& logits1, const Matrix& logits2,
                                             const Matrix& targets, const CodistillSpec& spec,
                                             std::int64_t step) {
  validate(spec);
  if (logits1.rows() != logits2.rows() || logits1.cols() != logits2.cols()) {
    throw ShapeError("co-distillation: logit shapes differ");
  }
  LossAndGrad first = loss_and_grad(CrossEntropyLoss{}, logits1, targets);
  LossAndGrad second = loss_and_grad(CrossEntropyLoss{}, logits2, targets);

  CodistillLossAndGrad out;
  out.loss = first.loss + second.loss;
  out.grad1 = std::move(first.logit_grad);
  out.grad2 = std::move(second.logit_grad);
  if (step < spec.n_warm || spec.a == 0.0) return out;

  const Matrix p1 = softmax_rows(logits1);
  const Matrix p2 = softmax_rows(logits2);
  const Eigen::Index m = p1.rows();
  const Eigen::Index L = p1.cols();
  const double scale = spec.a / static_cast<double>(m);
  double psi_total = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    RowVector u(L);       // ln max(p2, eps)
    RowVector w(L);       // d(p1 ln p1)/dp1 for KL
    double p1_dot_u = 0.0;
    double p1_dot_w = 0.0;
    double active_p1 = 0.0;  // mass of p1 where the p2 clamp is inactive
    for (Eigen::Index j = 0; j < L; ++j) {
      u[j] = std::log(std::max(p2(i, j), kLogClamp));
      p1_dot_u += p1(i, j) * u[j];
      if (p2(i, j) > kLogClamp) active_p1 += p1(i, j);
      if (spec.psi == PsiType::kl) {
        const double v = std::log(std::max(p1(i, j), kLogClamp));
        psi_total += p1(i, j) * (v - u[j]);
        w[j] = v + (p1(i, j) > kLogClamp ? 1.0 : 0.0);
        p1_dot_w += p1(i, j) * w[j];
      } else {
        psi_total -= p1(i, j) * u[j];
      }
    }
    for (Eigen::Index j = 0; j < L; ++j) {
      const double p1_active = p2(i, j) > kLogClamp ? p1(i, j) : 0.0;
      // -sum p1 ln p2 with respect to the second logits.
      out.grad2(i, j) += scale * (p2(i, j) * active_p1 - p1_active);
      // -sum p1 ln p2 with respect to the first logits.
      double g1 = -p1(i, j) * (u[j] - p1_dot_u);
      if (spec.psi == PsiType::kl) g1 += p1(i, j) * (w[j] - p1_dot_w);
      out.grad1(i, j) += scale * g1;
    }
  }
  out.coupling = spec.a * psi_total / static_cast<double>(m);
  out.loss += out.coupling;
  return out;
}

CodistillGradients codistill_gradients(const MlpParams& first, const MlpParams& second,
                                       const Batch& batch, const CodistillSpec& spec,
                                       std::int64_t step) {
  const ForwardTrace t1 = forward_trace(first, batch.features);
  const ForwardTrace t2 = forward_trace(second, batch.features);
  const CodistillLossAndGrad lg = codistill_loss_and_grad(t1.logits, t2.logits, batch.targets,
                                                          spec, step);
  CodistillGradients out;
  out.loss = lg.loss;
  out.first = backward(first, t1, lg.grad1);
  out.second = backward(second, t2, lg.grad2);
  return out;
}

namespace {

void require_finite(const MlpGradients& g, std::int64_t step) {
  for (std::size_t l = 0; l < g.weights.size(); ++l) {
    if (!g.weights[l].allFinite() || !g.biases[l].allFinite()) {
      throw NumericError(fmt::format("non-finite co-distillation gradient in layer {} at step {}",
                                     l, step + 1));
    }
  }
}

}  // namespace

std::pair<TrainedModel, TrainedModel> train_codistill(const Matrix& features,
                                                      const Matrix& targets,
                                                      const TrainConfig& config,
                                                      const CodistillSpec& spec) {
  validate(config);
  validate(spec);
  if (features.rows() == 0) throw ConfigError("cannot train on an empty dataset");
  if (targets.rows() != features.rows()) throw ShapeError("features and targets differ in length");

  std::vector<int> sizes{static_cast<int>(features.cols())};
  sizes.insert(sizes.end(), config.hidden_sizes.begin(), config.hidden_sizes.end());
  sizes.push_back(static_cast<int>(targets.cols()));

  const std::uint64_t peer_seed = mix_seed(config.seed, streams::kPeer);
  TrainedModel first{init_mlp(sizes, mix_seed(config.seed, streams::kInit)), config.seed, 0};
  TrainedModel second{init_mlp(sizes, mix_seed(peer_seed, streams::kInit)), peer_seed, 0};
  AdamState state1 = AdamState::for_params(first.params, config.adam);
  AdamState state2 = AdamState::for_params(second.params, config.adam);

  const auto n = static_cast<std::size_t>(features.rows());
  const auto bs = static_cast<std::size_t>(config.batch_size);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const std::vector<std::size_t> order = epoch_order(n, config.seed, epoch);
    for (std::size_t start = 0; start < n; start += bs) {
      const std::size_t end = std::min(n, start + bs);
      const Batch batch = gather_batch(features, targets,
                                       std::span(order).subspan(start, end - start));
      const std::int64_t step = state1.step_count;
      const CodistillGradients g = codistill_gradients(first.params, second.params, batch, spec, step);
      if (!std::isfinite(g.loss)) {
        throw NumericError(fmt::format("non-finite co-distillation loss at step {}", step + 1));
      }
      require_finite(g.first, step);
      require_finite(g.second, step);
      adam_update(first.params, state1, g.first);
      adam_update(second.params, state2, g.second);
    }
  }
  first.steps = state1.step_count;
  second.steps = state2.step_count;
  return {std::move(first), std::move(second)};
}

Predictions ensemble_predict(std::span<const MlpParams> models, const Matrix& features) {
  if (models.empty()) throw ParameterError("ensemble needs at least one model");
  Matrix mean = softmax_rows(forward_logits(models[0], features));
  for (std::size_t j = 1; j < models.size(); ++j) {
    if (models[j].layer_sizes != models[0].layer_sizes) {
      throw ShapeError("ensemble members must share one architecture");
    }
    const Matrix probs = softmax_rows(forward_logits(models[j], features));
    mean += (probs - mean) / static_cast<double>(j + 1);
  }
  return predictions_from_probs(std::move(mean));
}

}  // namespace churnlab
