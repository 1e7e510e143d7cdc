#include "churnlab/csv_io.hpp"

#include "churnlab/error.hpp"

#include <fmt/format.h>

#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace churnlab {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

bool parse_double(std::string_view cell, double& value) {
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  return ec == std::errc() && ptr == cell.data() + cell.size() && !cell.empty();
}

}  // namespace

Dataset load_csv(const std::filesystem::path& path, const std::string& label_column,
                 bool has_header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open '{}'", path.string()));

  std::vector<std::string> lines;
  std::vector<std::size_t> line_numbers;
  std::string line;
  for (std::size_t number = 1; std::getline(in, line); ++number) {
    if (number == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (trim(line).empty()) continue;
    lines.push_back(line);
    line_numbers.push_back(number);
  }
  if (in.bad()) throw IoError(fmt::format("error reading '{}'", path.string()));
  if (lines.empty()) throw ParseError(fmt::format("'{}' is empty", path.string()));

  std::size_t first_data = 0;
  std::size_t columns = split_fields(lines[0]).size();
  std::size_t label_index = columns;
  if (has_header) {
    const auto header = split_fields(lines[0]);
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (header[c] == label_column) label_index = c;
    }
    first_data = 1;
  } else {
    std::size_t parsed = 0;
    const auto [ptr, ec] = std::from_chars(label_column.data(),
                                           label_column.data() + label_column.size(), parsed);
    if (ec == std::errc() && ptr == label_column.data() + label_column.size()) label_index = parsed;
  }
  if (label_index >= columns) {
    throw ConfigError(fmt::format("label column '{}' not found in '{}'", label_column, path.string()));
  }
  if (columns < 2) throw ParseError(fmt::format("'{}' needs at least one feature column", path.string()));
  const std::size_t n = lines.size() - first_data;
  if (n == 0) throw ParseError(fmt::format("'{}' has a header but no rows", path.string()));

  Dataset data;
  data.name = path.stem().string();
  data.features.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(columns - 1));
  data.classes.resize(n);
  std::unordered_map<std::string, int> class_of;
  for (std::size_t i = 0; i < n; ++i) {
    const auto fields = split_fields(lines[first_data + i]);
    const std::size_t row = line_numbers[first_data + i];
    if (fields.size() != columns) {
      throw ParseError(fmt::format("{}: row {}: expected {} columns, found {}", path.string(), row,
                                   columns, fields.size()));
    }
    Eigen::Index feature = 0;
    for (std::size_t c = 0; c < columns; ++c) {
      if (c == label_index) {
        const std::string name(fields[c]);
        auto [it, inserted] = class_of.emplace(name, static_cast<int>(data.class_names.size()));
        if (inserted) data.class_names.push_back(name);
        data.classes[i] = it->second;
        continue;
      }
      double value = 0.0;
      if (!parse_double(fields[c], value)) {
        throw ParseError(fmt::format("{}: row {}, column {}: '{}' is not a number", path.string(),
                                     row, c + 1, fields[c]));
      }
      data.features(static_cast<Eigen::Index>(i), feature++) = value;
    }
  }
  data.num_classes = static_cast<int>(data.class_names.size());
  if (data.num_classes < 2) {
    throw ConfigError(fmt::format("label column of '{}' holds a single class", path.string()));
  }
  data.labels = one_hot_matrix(data.classes, data.num_classes);
  validate(data);
  return data;
}

void save_csv(const Dataset& data, const std::filesystem::path& path,
              const std::string& label_name) {
  validate(data);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot write '{}'", path.string()));
  std::string text;
  for (int j = 0; j < data.dim(); ++j) text += fmt::format("x{},", j);
  text += label_name;
  text += '\n';
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (int j = 0; j < data.dim(); ++j) {
      // fmt's default double formatting is the shortest round-trip form.
      text += fmt::format("{},", data.features(static_cast<Eigen::Index>(i), j));
    }
    const int c = data.classes[i];
    text += data.class_names.empty() ? std::to_string(c)
                                     : data.class_names[static_cast<std::size_t>(c)];
    text += '\n';
  }
  out << text;
  if (!out) throw IoError(fmt::format("error writing '{}'", path.string()));
}

}  // namespace churnlab
