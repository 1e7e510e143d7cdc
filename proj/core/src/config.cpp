#include "churnlab/config.hpp"

#include "churnlab/error.hpp"
#include "churnlab/losses.hpp"
#include "churnlab/random.hpp"
#include "churnlab/smoothing.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace churnlab {

namespace {

namespace pt = boost::property_tree;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

template <class T>
T parse_number(std::string_view text, const std::string& key) {
  text = trim(text);
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ConfigError(fmt::format("{}: '{}' is not a valid number", key, text));
  }
  return value;
}

bool parse_bool(std::string_view text, const std::string& key) {
  text = trim(text);
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError(fmt::format("{}: '{}' is not a boolean", key, text));
}

template <class T>
std::vector<T> parse_list(std::string_view text, const std::string& key) {
  std::vector<T> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string_view item = text.substr(start, comma - start);
    out.push_back(parse_number<T>(item, key));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

int as_int(double value, const std::string& key) {
  if (value != std::floor(value) || std::abs(value) > 2e9) {
    throw ConfigError(fmt::format("{} must be an integer, got {}", key, value));
  }
  return static_cast<int>(value);
}

// Hyperparameters each method reads, in canonical order.
std::vector<std::string> relevant_keys(Method method) {
  switch (method) {
    case Method::control:
      return {};
    case Method::label_smoothing:
    case Method::anchor:
    case Method::mixup:
      return {"a"};
    case Method::knn_ls:
      return {"a", "b", "k"};
    case Method::lp_reg:
      return {"a", "p"};
    case Method::codistill:
      return {"a", "n_warm", "psi"};
    case Method::bitempered:
      return {"t1", "t2", "n_iters"};
    case Method::ensemble:
      return {"m"};
  }
  return {};
}

void require_unit(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) throw ParameterError(fmt::format("{} = {} outside [0, 1]", what, v));
}

}  // namespace

Method parse_method(const std::string& name) {
  static const std::pair<const char*, Method> names[] = {
      {"control", Method::control},       {"label_smoothing", Method::label_smoothing},
      {"knn_ls", Method::knn_ls},         {"anchor", Method::anchor},
      {"lp_reg", Method::lp_reg},         {"codistill", Method::codistill},
      {"bitempered", Method::bitempered}, {"mixup", Method::mixup},
      {"ensemble", Method::ensemble}};
  for (const auto& [text, method] : names) {
    if (name == text) return method;
  }
  throw ConfigError(fmt::format("unknown method '{}'", name));
}

std::string to_string(Method method) {
  switch (method) {
    case Method::control: return "control";
    case Method::label_smoothing: return "label_smoothing";
    case Method::knn_ls: return "knn_ls";
    case Method::anchor: return "anchor";
    case Method::lp_reg: return "lp_reg";
    case Method::codistill: return "codistill";
    case Method::bitempered: return "bitempered";
    case Method::mixup: return "mixup";
    case Method::ensemble: return "ensemble";
  }
  return "unknown";
}

std::string MethodSpec::hyperparams() const {
  std::string out;
  for (const std::string& key : relevant_keys(method)) {
    if (!out.empty()) out += ',';
    if (key == "a") out += fmt::format("a={}", a);
    else if (key == "b") out += fmt::format("b={}", b);
    else if (key == "k") out += fmt::format("k={}", k);
    else if (key == "p") out += fmt::format("p={}", p);
    else if (key == "t1") out += fmt::format("t1={}", t1);
    else if (key == "t2") out += fmt::format("t2={}", t2);
    else if (key == "n_iters") out += fmt::format("n_iters={}", n_iters);
    else if (key == "n_warm") out += fmt::format("n_warm={}", n_warm);
    else if (key == "psi") out += fmt::format("psi={}", to_string(psi));
    else if (key == "m") out += fmt::format("m={}", m);
  }
  return out;
}

void MethodSpec::set(const std::string& key, double value) {
  if (key == "a") a = value;
  else if (key == "b") b = value;
  else if (key == "k") k = as_int(value, key);
  else if (key == "p") p = as_int(value, key);
  else if (key == "t1") t1 = value;
  else if (key == "t2") t2 = value;
  else if (key == "n_iters") n_iters = as_int(value, key);
  else if (key == "n_warm") n_warm = as_int(value, key);
  else if (key == "m") m = as_int(value, key);
  else if (key == "prelim_seed") {
    if (value < 0 || value != std::floor(value)) throw ConfigError("prelim_seed must be a non-negative integer");
    prelim_seed = static_cast<std::uint64_t>(value);
  } else {
    throw ConfigError(fmt::format("unknown hyperparameter '{}'", key));
  }
}

void validate(const MethodSpec& spec) {
  switch (spec.method) {
    case Method::control:
      break;
    case Method::label_smoothing:
    case Method::anchor:
      require_unit(spec.a, "a");
      break;
    case Method::knn_ls:
      validate(SmoothingParams{spec.a, spec.b, spec.k});
      break;
    case Method::lp_reg:
      validate(LossSpec{LpRegLoss{spec.a, spec.p}});
      break;
    case Method::codistill:
      validate(CodistillSpec{spec.a, spec.psi, spec.n_warm});
      break;
    case Method::bitempered:
      validate(LossSpec{BiTemperedLoss{spec.t1, spec.t2, spec.n_iters}});
      break;
    case Method::mixup:
      if (!(spec.a > 0.0)) throw ParameterError(fmt::format("mixup a = {} must be positive", spec.a));
      break;
    case Method::ensemble:
      if (spec.m < 1) throw ParameterError(fmt::format("ensemble size {} must be >= 1", spec.m));
      break;
  }
}

std::string ExperimentConfig::fingerprint() const {
  std::string hidden_text;
  for (int h : hidden) hidden_text += fmt::format("{};", h);
  const std::string canonical = fmt::format(
      "data={}|{}|{}|{}|{}|{}|{}|{}|{}|{}|{}|model={}|{}|{}|{}|method={}|{}|{}|{}|runs={}",
      dataset.source, dataset.n, dataset.flip_fraction, dataset.eta, dataset.dim, dataset.seed,
      dataset.path, dataset.label_column, dataset.has_header, dataset.test_fraction,
      dataset.split_seed, hidden_text, epochs, batch_size, learning_rate, to_string(method.method),
      method.hyperparams(), method.method == Method::anchor ? method.prelim_seed : 0,
      method.method == Method::knn_ls && method.phase_one_seed
          ? fmt::format("{}", *method.phase_one_seed)
          : std::string("-"),
      n_runs);
  return fmt::format("{:016x}", stable_hash(canonical));
}

void validate(const ExperimentConfig& config) {
  const DatasetSpec& d = config.dataset;
  if (d.source == "two_gaussians") {
    if (d.n < 2 || d.n % 2 != 0) throw ParameterError("dataset.n must be even and >= 2");
    if (!(d.flip_fraction >= 0.0 && d.flip_fraction < 1.0)) {
      throw ParameterError("dataset.flip_fraction outside [0, 1)");
    }
  } else if (d.source == "smooth") {
    parse_eta(d.eta);
    if (d.n < 2 || d.dim < 1) throw ParameterError("smooth dataset needs n >= 2 and dim >= 1");
  } else if (d.source == "csv") {
    if (d.path.empty()) throw ConfigError("dataset.path is required for csv data");
  } else {
    throw ConfigError(fmt::format("unknown dataset source '{}'", d.source));
  }
  if (!(d.test_fraction > 0.0 && d.test_fraction < 1.0)) {
    throw ParameterError("dataset.test_fraction outside (0, 1)");
  }
  if (config.hidden.empty()) throw ConfigError("model.hidden needs at least one layer");
  for (int h : config.hidden) {
    if (h < 1) throw ConfigError("hidden layer sizes must be positive");
  }
  if (config.epochs < 1) throw ConfigError("model.epochs must be >= 1");
  if (config.batch_size < 1) throw ConfigError("model.batch_size must be >= 1");
  if (!(config.learning_rate > 0.0)) throw ParameterError("model.learning_rate must be positive");
  if (config.n_runs < 2) throw ConfigError("experiment.n_runs must be >= 2 to measure churn");
  if (config.workers < 1) throw ConfigError("experiment.workers must be >= 1");
  validate(config.method);
}

std::size_t SweepGrid::size() const {
  std::size_t total = 1;
  for (const auto& [key, values] : axes) total *= values.size();
  return total;
}

std::vector<std::vector<std::pair<std::string, double>>> SweepGrid::points() const {
  std::vector<std::vector<std::pair<std::string, double>>> out;
  const std::size_t total = size();
  out.reserve(total);
  for (std::size_t index = 0; index < total; ++index) {
    std::vector<std::pair<std::string, double>> point(axes.size());
    std::size_t rest = index;
    for (std::size_t a = axes.size(); a-- > 0;) {
      const auto& [key, values] = axes[a];
      point[a] = {key, values[rest % values.size()]};
      rest /= values.size();
    }
    out.push_back(std::move(point));
  }
  return out;
}

SweepGrid SweepGrid::defaults_for(Method method) {
  const std::vector<double> mix_a{0.005, 0.01, 0.02, 0.05, 0.1, 0.5, 0.8, 0.9, 1.0};
  const std::vector<double> reg_a{0.001, 0.01, 0.05, 0.1, 0.2, 0.5};
  SweepGrid grid;
  switch (method) {
    case Method::control:
      break;
    case Method::label_smoothing:
    case Method::anchor:
      grid.axes = {{"a", mix_a}};
      break;
    case Method::knn_ls:
      grid.axes = {{"k", {5, 10, 100, 500}}, {"a", mix_a}, {"b", {0, 0.05, 0.1, 0.5, 0.9}}};
      break;
    case Method::lp_reg:
      grid.axes = {{"p", {1, 2}}, {"a", reg_a}};
      break;
    case Method::codistill:
      grid.axes = {{"a", reg_a}, {"n_warm", {1000, 2000}}};
      break;
    case Method::bitempered:
      grid.axes = {{"t1", {0.3, 0.5, 0.7, 0.9}}, {"t2", {1, 2, 3, 4}}, {"n_iters", {5}}};
      break;
    case Method::mixup:
      grid.axes = {{"a", {0.2, 0.3, 0.4, 0.5}}};
      break;
    case Method::ensemble:
      grid.axes = {{"m", {3, 5}}};
      break;
  }
  return grid;
}

ConfigFile parse_config(const std::string& text) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(fmt::format("config line {}: {}", e.line(), e.message()));
  }

  ConfigFile file;
  ExperimentConfig& ex = file.experiment;
  TheoryConfig& th = file.theory;
  bool default_sweep = false;
  std::vector<std::pair<std::string, std::vector<double>>> sweep_axes;
  bool has_sweep = false;

  // Method name first so that hyperparameter keys can be checked against it.
  if (auto section = tree.get_child_optional("method")) {
    if (auto name = section->get_optional<std::string>("name")) {
      ex.method.method = parse_method(std::string(trim(*name)));
    }
  }

  for (const auto& [section, entries] : tree) {
    if (!entries.data().empty()) {
      throw ConfigError(fmt::format("key '{}' must live inside a [section]", section));
    }
    for (const auto& [key, node] : entries) {
      const std::string value(trim(node.data()));
      const std::string where = section + "." + key;
      if (section == "experiment") {
        if (key == "name") ex.name = value;
        else if (key == "n_runs") ex.n_runs = parse_number<int>(value, where);
        else if (key == "base_seed") ex.base_seed = parse_number<std::uint64_t>(value, where);
        else if (key == "workers") ex.workers = parse_number<int>(value, where);
        else throw ConfigError(fmt::format("unknown key '{}'", where));
      } else if (section == "dataset") {
        DatasetSpec& d = ex.dataset;
        if (key == "source") d.source = value;
        else if (key == "n") d.n = parse_number<std::size_t>(value, where);
        else if (key == "flip_fraction") d.flip_fraction = parse_number<double>(value, where);
        else if (key == "eta") d.eta = value;
        else if (key == "dim") d.dim = parse_number<int>(value, where);
        else if (key == "seed") d.seed = parse_number<std::uint64_t>(value, where);
        else if (key == "path") d.path = value;
        else if (key == "label_column") d.label_column = value;
        else if (key == "has_header") d.has_header = parse_bool(value, where);
        else if (key == "test_fraction") d.test_fraction = parse_number<double>(value, where);
        else if (key == "split_seed") d.split_seed = parse_number<std::uint64_t>(value, where);
        else throw ConfigError(fmt::format("unknown key '{}'", where));
      } else if (section == "model") {
        if (key == "hidden") ex.hidden = parse_list<int>(value, where);
        else if (key == "epochs") ex.epochs = parse_number<int>(value, where);
        else if (key == "batch_size") ex.batch_size = parse_number<int>(value, where);
        else if (key == "learning_rate") ex.learning_rate = parse_number<double>(value, where);
        else throw ConfigError(fmt::format("unknown key '{}'", where));
      } else if (section == "method") {
        if (key == "name") continue;
        if (key == "psi") {
          ex.method.psi = parse_psi(value);
        } else if (key == "prelim_seed") {
          ex.method.prelim_seed = parse_number<std::uint64_t>(value, where);
        } else if (key == "phase_one_seed") {
          ex.method.phase_one_seed = parse_number<std::uint64_t>(value, where);
        } else {
          ex.method.set(key, parse_number<double>(value, where));
        }
      } else if (section == "sweep") {
        has_sweep = true;
        if (key == "grid") {
          if (value != "default") throw ConfigError("sweep.grid only accepts 'default'");
          default_sweep = true;
          continue;
        }
        const auto keys = relevant_keys(ex.method.method);
        if (key == "psi" || std::find(keys.begin(), keys.end(), key) == keys.end()) {
          throw ConfigError(fmt::format("'{}' is not a sweepable hyperparameter of {}", key,
                                        to_string(ex.method.method)));
        }
        auto values = parse_list<double>(value, where);
        if (values.empty()) throw ConfigError(fmt::format("{} has no values", where));
        sweep_axes.emplace_back(key, std::move(values));
      } else if (section == "theory") {
        if (key == "mode") th.mode = value;
        else if (key == "eta") th.eta = parse_eta(value);
        else if (key == "dim") th.dim = parse_number<int>(value, where);
        else if (key == "schedule") {
          if (value == "power") th.schedule.kind = KSchedule::Kind::power;
          else if (value == "linear") th.schedule.kind = KSchedule::Kind::linear;
          else throw ConfigError(fmt::format("{}: '{}' is not power or linear", where, value));
        } else if (key == "exponent") th.schedule.exponent = parse_number<double>(value, where);
        else if (key == "beta") {
          th.schedule.beta = parse_number<double>(value, where);
          th.beta = th.schedule.beta;
        } else if (key == "target") {
          if (value == "eta") th.target = RateTarget::eta;
          else if (value == "beta_smoothed") th.target = RateTarget::beta_smoothed;
          else throw ConfigError(fmt::format("{}: '{}' is not eta or beta_smoothed", where, value));
        } else if (key == "n_grid") th.n_grid = parse_list<std::size_t>(value, where);
        else if (key == "trials") th.trials = parse_number<int>(value, where);
        else if (key == "grid_per_axis") th.grid_per_axis = parse_number<int>(value, where);
        else if (key == "delta") th.delta = parse_number<double>(value, where);
        else if (key == "oracle_samples") th.oracle_samples = parse_number<std::size_t>(value, where);
        else if (key == "seed") th.seed = parse_number<std::uint64_t>(value, where);
        else if (key == "n") th.n = parse_number<std::size_t>(value, where);
        else if (key == "k") th.k = parse_number<int>(value, where);
        else if (key == "alpha") th.constants.alpha = parse_number<double>(value, where);
        else if (key == "c_alpha") th.constants.c_alpha = parse_number<double>(value, where);
        else if (key == "omega") th.constants.omega = parse_number<double>(value, where);
        else if (key == "density_floor") th.constants.density_floor = parse_number<double>(value, where);
        else if (key == "r0") th.constants.r0 = parse_number<double>(value, where);
        else throw ConfigError(fmt::format("unknown key '{}'", where));
      } else {
        throw ConfigError(fmt::format("unknown section [{}]", section));
      }
    }
  }

  if (th.mode != "rate" && th.mode != "coverage" && th.mode != "bounds") {
    throw ConfigError(fmt::format("theory.mode '{}' is not rate, coverage or bounds", th.mode));
  }
  if (has_sweep) {
    SweepGrid grid = default_sweep ? SweepGrid::defaults_for(ex.method.method) : SweepGrid{};
    for (auto& axis : sweep_axes) {
      auto it = std::find_if(grid.axes.begin(), grid.axes.end(),
                             [&](const auto& a) { return a.first == axis.first; });
      if (it != grid.axes.end()) it->second = std::move(axis.second);
      else grid.axes.push_back(std::move(axis));
    }
    // Every point must be a valid setting.
    for (const auto& point : grid.points()) {
      MethodSpec spec = ex.method;
      for (const auto& [key, v] : point) spec.set(key, v);
      validate(spec);
    }
    file.sweep = std::move(grid);
  }
  validate(ex);
  return file;
}

ConfigFile load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open config '{}'", path.string()));
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

}  // namespace churnlab
