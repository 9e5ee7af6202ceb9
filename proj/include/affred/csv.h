#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "affred/geometry.h"

namespace affred {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Comma-separated text with a header row. Fields are trimmed; quoting is
/// not supported. Throws InputError on ragged rows.
CsvTable parse_csv(const std::string& text);

/// Locale-independent parse of a decimal number; nullopt if `s` is not one.
std::optional<double> parse_number(const std::string& s);

/// Points plus the names of their coordinate columns.
struct Dataset {
  Configuration points;
  std::vector<std::string> variables;
};

/// Builds a dataset from a table. `label_column` picks the label column
/// by name; when empty the first column holding a non-numeric entry is used,
/// and if every column is numeric the points stay unlabeled. All remaining
/// columns must be numeric.
Dataset dataset_from_csv(const CsvTable& table, const std::string& label_column = {});

std::string read_text_file(const std::filesystem::path& path);

}  // namespace affred
