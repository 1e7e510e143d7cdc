#include "churnlab/experiment.hpp"

#include "churnlab/baselines.hpp"
#include "churnlab/csv_io.hpp"
#include "churnlab/error.hpp"
#include "churnlab/generators.hpp"
#include "churnlab/parallel.hpp"
#include "churnlab/problem.hpp"
#include "churnlab/random.hpp"
#include "churnlab/smoothing.hpp"

#include <fmt/format.h>

namespace churnlab {

namespace {

// Rethrows `e` as the same error class with the run index prepended.
[[noreturn]] void rethrow_with_run(int run) {
  try {
    throw;
  } catch (const ConfigError& e) {
    throw ConfigError(fmt::format("run {}: {}", run, e.what()));
  } catch (const ParameterError& e) {
    throw ParameterError(fmt::format("run {}: {}", run, e.what()));
  } catch (const ShapeError& e) {
    throw ShapeError(fmt::format("run {}: {}", run, e.what()));
  } catch (const NumericError& e) {
    throw NumericError(fmt::format("run {}: {}", run, e.what()));
  } catch (const IoError& e) {
    throw IoError(fmt::format("run {}: {}", run, e.what()));
  } catch (const ParseError& e) {
    throw ParseError(fmt::format("run {}: {}", run, e.what()));
  } catch (const std::exception& e) {
    throw Error(fmt::format("run {}: {}", run, e.what()));
  }
}

RunRecord record(int run_index, std::uint64_t seed, const std::string& fingerprint,
                 Predictions preds) {
  return {run_index, seed, fingerprint, std::move(preds.classes), std::move(preds.probs)};
}

}  // namespace

PreparedData prepare_data(const DatasetSpec& spec) {
  Dataset full;
  if (spec.source == "two_gaussians") {
    full = gen_two_gaussians(spec.n, spec.flip_fraction, spec.seed);
  } else if (spec.source == "smooth") {
    full = gen_smooth_problem(spec.n, spec.dim, parse_eta(spec.eta), spec.seed).first;
  } else if (spec.source == "csv") {
    full = load_csv(spec.path, spec.label_column, spec.has_header);
  } else {
    throw ConfigError(fmt::format("unknown dataset source '{}'", spec.source));
  }
  auto [train, test] = split(full, spec.test_fraction, spec.split_seed);
  return {std::move(train), std::move(test)};
}

TrainConfig make_train_config(const ExperimentConfig& config, std::uint64_t seed) {
  TrainConfig tc;
  tc.hidden_sizes = config.hidden;
  tc.epochs = config.epochs;
  tc.batch_size = config.batch_size;
  tc.adam.lr = config.learning_rate;
  tc.seed = seed;
  const MethodSpec& m = config.method;
  switch (m.method) {
    case Method::lp_reg:
      tc.loss = LpRegLoss{m.a, m.p};
      break;
    case Method::bitempered:
      tc.loss = BiTemperedLoss{m.t1, m.t2, m.n_iters};
      break;
    case Method::mixup:
      tc.mixup_alpha = m.a;
      break;
    default:
      break;
  }
  return tc;
}

TrainedModel train_anchor_model(const ExperimentConfig& config, const PreparedData& data) {
  TrainConfig tc = make_train_config(config, config.method.prelim_seed);
  tc.loss = CrossEntropyLoss{};
  tc.mixup_alpha.reset();
  return train(data.train, tc);
}

RunRecord run_once(const ExperimentConfig& config, const PreparedData& data, int run_index,
                   std::uint64_t seed, const TrainedModel* anchor_model) {
  const MethodSpec& m = config.method;
  const Dataset& tr = data.train;
  const Matrix& test_x = data.test.features;
  const std::string fp = config.fingerprint();
  const TrainConfig tc = make_train_config(config, seed);

  switch (m.method) {
    case Method::control:
    case Method::lp_reg:
    case Method::bitempered:
    case Method::mixup:
      return record(run_index, seed, fp, predict(train(tr, tc).params, test_x));
    case Method::label_smoothing: {
      const Matrix targets = global_label_smooth_rows(tr.labels, m.a);
      return record(run_index, seed, fp, predict(train(tr.features, targets, tc).params, test_x));
    }
    case Method::knn_ls: {
      const std::uint64_t first = m.phase_one_seed ? *m.phase_one_seed
                                                   : mix_seed(seed, streams::kPhaseOne);
      KnnPipelineConfig pipeline{make_train_config(config, first), tc};
      const KnnPipelineResult result = deep_knn_pipeline(tr, pipeline, {m.a, m.b, m.k});
      return record(run_index, seed, fp, predict(result.model.params, test_x));
    }
    case Method::anchor: {
      if (anchor_model == nullptr) throw ConfigError("anchor runs need the preliminary model");
      const Matrix prelim = predict(anchor_model->params, tr.features).probs;
      const Matrix targets = anchor_label_rows(tr.labels, prelim, m.a);
      return record(run_index, seed, fp, predict(train(tr.features, targets, tc).params, test_x));
    }
    case Method::codistill: {
      const auto models = train_codistill(tr.features, tr.labels, tc, {m.a, m.psi, m.n_warm});
      return record(run_index, seed, fp, predict(models.first.params, test_x));
    }
    case Method::ensemble: {
      std::vector<MlpParams> members;
      members.reserve(static_cast<std::size_t>(m.m));
      for (int j = 0; j < m.m; ++j) {
        TrainConfig member = tc;
        if (j > 0) member.seed = mix_seed(seed, streams::kEnsemble + static_cast<std::uint64_t>(j));
        members.push_back(train(tr, member).params);
      }
      return record(run_index, seed, fp, ensemble_predict(members, test_x));
    }
  }
  throw ConfigError("unhandled method");
}

ExperimentResult run_experiment(const ExperimentConfig& config, const PreparedData& data) {
  validate(config);
  validate(data.train);
  validate(data.test);
  if (data.train.num_classes != data.test.num_classes) {
    throw ShapeError("train and test splits disagree on the number of classes");
  }
  std::optional<TrainedModel> anchor;
  if (config.method.method == Method::anchor) anchor = train_anchor_model(config, data);

  ExperimentResult result;
  result.method = to_string(config.method.method);
  result.hyperparams = config.method.hyperparams();
  result.truth = data.test.classes;
  result.runs.resize(static_cast<std::size_t>(config.n_runs));
  parallel_for(result.runs.size(), config.workers, [&](std::size_t r) {
    const int run = static_cast<int>(r);
    try {
      result.runs[r] = run_once(config, data, run, config.base_seed + r,
                                anchor ? &*anchor : nullptr);
    } catch (...) {
      rethrow_with_run(run);
    }
  });
  result.report = pairwise_stats(std::span<const RunRecord>(result.runs), result.truth);
  return result;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  validate(config);
  return run_experiment(config, prepare_data(config.dataset));
}

}  // namespace churnlab
