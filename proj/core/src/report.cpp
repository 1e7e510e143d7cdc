#include "churnlab/report.hpp"

#include "churnlab/error.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace churnlab {

namespace {

using nlohmann::json;

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string csv_pair(const std::optional<MeanStd>& v) {
  return v ? fmt::format("{},{}", v->mean, v->std) : std::string(",");
}

std::string cell(const std::optional<MeanStd>& v) {
  return v ? format_mean_std(v->mean, v->std) : std::string("-");
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot write '{}'", path.string()));
  out << text;
  if (!out) throw IoError(fmt::format("error writing '{}'", path.string()));
}

}  // namespace

ReportFormat parse_format(const std::string& name) {
  if (name == "csv") return ReportFormat::csv;
  if (name == "table") return ReportFormat::table;
  if (name == "jsonl") return ReportFormat::jsonl;
  throw ConfigError(fmt::format("unknown format '{}' (csv, table, jsonl)", name));
}

std::string format_mean_std(double mean, double std) {
  return fmt::format("{:.2f} ({:.2f})", mean, std);
}

std::vector<bool> pareto_flags(std::span<const ExperimentResult> results) {
  std::vector<bool> flags(results.size(), false);
  if (results.empty()) return flags;
  std::vector<std::pair<double, double>> points;
  for (const auto& r : results) points.emplace_back(r.report.accuracy.mean, r.report.churn.mean);
  for (std::size_t i : pareto_frontier(points)) flags[i] = true;
  return flags;
}

std::string render_summary_csv(std::span<const ExperimentResult> results) {
  std::string out =
      "method,hyperparams,accuracy_mean,accuracy_std,churn_mean,churn_std,churn_correct_mean,"
      "churn_correct_std,churn_incorrect_mean,churn_incorrect_std,pareto_flag\n";
  const auto flags = pareto_flags(results);
  for (std::size_t i = 0; i < results.size(); ++i) {
    const ChurnReport& r = results[i].report;
    out += fmt::format("{},{},{},{},{},{},{},{},{}\n", csv_field(results[i].method),
                       csv_field(results[i].hyperparams), r.accuracy.mean, r.accuracy.std,
                       r.churn.mean, r.churn.std, csv_pair(r.churn_correct),
                       csv_pair(r.churn_incorrect), flags[i] ? "true" : "false");
  }
  return out;
}

std::string render_table(std::span<const ExperimentResult> results) {
  std::vector<std::vector<std::string>> rows{
      {"method", "hyperparams", "accuracy", "churn", "churn_correct", "churn_incorrect", "pareto"}};
  const auto flags = pareto_flags(results);
  for (std::size_t i = 0; i < results.size(); ++i) {
    const ChurnReport& r = results[i].report;
    rows.push_back({results[i].method, results[i].hyperparams.empty() ? "-" : results[i].hyperparams,
                    format_mean_std(r.accuracy.mean, r.accuracy.std),
                    format_mean_std(r.churn.mean, r.churn.std), cell(r.churn_correct),
                    cell(r.churn_incorrect), flags[i] ? "*" : ""});
  }
  std::vector<std::size_t> width(rows[0].size(), 0);
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  std::string out;
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) line += "  ";
      line += fmt::format("{:<{}}", row[c], width[c]);
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + '\n';
  }
  return out;
}

std::string render_runs_jsonl(std::span<const ExperimentResult> results) {
  std::string out;
  for (const ExperimentResult& result : results) {
    for (const RunRecord& run : result.runs) {
      json probs = json::array();
      for (Eigen::Index i = 0; i < run.probs.rows(); ++i) {
        probs.push_back(std::vector<double>(run.probs.row(i).begin(), run.probs.row(i).end()));
      }
      json line = {{"method", result.method},
                   {"hyperparams", result.hyperparams},
                   {"run", run.run_index},
                   {"seed", run.seed},
                   {"fingerprint", run.fingerprint},
                   {"truth", result.truth},
                   {"classes", run.classes},
                   {"probs", std::move(probs)}};
      out += line.dump() + '\n';
    }
  }
  return out;
}

std::vector<ExperimentResult> parse_runs_jsonl(const std::string& text) {
  std::vector<ExperimentResult> results;
  std::map<std::pair<std::string, std::string>, std::size_t> index;
  std::istringstream in(text);
  std::string line;
  for (std::size_t number = 1; std::getline(in, line); ++number) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json j = json::parse(line);
      const std::string method = j.at("method").get<std::string>();
      const std::string hyper = j.at("hyperparams").get<std::string>();
      auto [it, inserted] = index.emplace(std::pair{method, hyper}, results.size());
      if (inserted) {
        ExperimentResult r;
        r.method = method;
        r.hyperparams = hyper;
        r.truth = j.at("truth").get<std::vector<int>>();
        results.push_back(std::move(r));
      }
      ExperimentResult& r = results[it->second];
      if (j.at("truth").get<std::vector<int>>() != r.truth) {
        throw ParseError(fmt::format("line {}: runs of one setting disagree on the test labels", number));
      }
      RunRecord run;
      run.run_index = j.at("run").get<int>();
      run.seed = j.at("seed").get<std::uint64_t>();
      run.fingerprint = j.at("fingerprint").get<std::string>();
      run.classes = j.at("classes").get<std::vector<int>>();
      const auto rows = j.at("probs").get<std::vector<std::vector<double>>>();
      const std::size_t cols = rows.empty() ? 0 : rows[0].size();
      run.probs.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols) throw ParseError(fmt::format("line {}: ragged probs", number));
        for (std::size_t c = 0; c < cols; ++c) {
          run.probs(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = rows[i][c];
        }
      }
      r.runs.push_back(std::move(run));
    } catch (const json::exception& e) {
      throw ParseError(fmt::format("line {}: {}", number, e.what()));
    }
  }
  if (results.empty()) throw ParseError("no run records found");
  for (ExperimentResult& r : results) {
    r.report = pairwise_stats(std::span<const RunRecord>(r.runs), r.truth);
  }
  return results;
}

std::vector<ExperimentResult> read_runs_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open '{}'", path.string()));
  std::ostringstream text;
  text << in.rdbuf();
  return parse_runs_jsonl(text.str());
}

void write_report(std::span<const ExperimentResult> results, const std::filesystem::path& out_dir,
                  std::optional<ReportFormat> format) {
  if (results.empty()) throw ConfigError("nothing to report");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError(fmt::format("cannot create '{}': {}", out_dir.string(), ec.message()));
  if (!format || *format == ReportFormat::csv) {
    write_text(out_dir / "summary.csv", render_summary_csv(results));
  }
  if (!format || *format == ReportFormat::table) {
    write_text(out_dir / "report.txt", render_table(results));
  }
  if (!format || *format == ReportFormat::jsonl) {
    write_text(out_dir / "runs.jsonl", render_runs_jsonl(results));
  }
}

}  // namespace churnlab
