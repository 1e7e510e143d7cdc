#pragma once

#include "churnlab/dataset.hpp"

#include <filesystem>
#include <string>

namespace churnlab {

// Reads a comma-separated file. `label_column` is a header name, or a
// 0-based column index when there is no header. Every other column must be
// numeric. Class names are mapped to indices in order of first appearance.
//
// Throws IoError if the file cannot be read, ConfigError if the label
// column does not exist, and ParseError (with 1-based row and column) for
// non-numeric cells or ragged rows.
Dataset load_csv(const std::filesystem::path& path, const std::string& label_column,
                 bool has_header);

// Writes a header row x0..x{D-1},<label_name> and one row per example with
// shortest round-trip number formatting. Labels are written by class name.
void save_csv(const Dataset& data, const std::filesystem::path& path,
              const std::string& label_name = "label");

}  // namespace churnlab
