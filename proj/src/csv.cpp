#include "affred/csv.h"

#include <charconv>
#include <fstream>
#include <sstream>

#include "affred/errors.h"

namespace affred {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

CsvTable parse_csv(const std::string& text) {
  CsvTable table;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split(line);
    if (table.header.empty()) {
      table.header = std::move(fields);
      continue;
    }
    if (fields.size() != table.header.size()) {
      throw InputError("line " + std::to_string(line_no) + " has " +
                       std::to_string(fields.size()) + " fields, header has " +
                       std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(fields));
  }
  if (table.header.empty()) throw InputError("CSV input is empty");
  return table;
}

std::optional<double> parse_number(const std::string& s) {
  if (s.empty()) return std::nullopt;
  const char* begin = s.data();
  if (*begin == '+') ++begin;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(begin, s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

Dataset dataset_from_csv(const CsvTable& table, const std::string& label_column) {
  if (table.rows.empty()) throw InputError("CSV input has no data rows");
  const std::size_t cols = table.header.size();
  std::optional<std::size_t> label_index;
  if (!label_column.empty()) {
    for (std::size_t j = 0; j < cols; ++j) {
      if (table.header[j] == label_column) label_index = j;
    }
    if (!label_index) throw InputError("label column '" + label_column + "' not found");
  } else {
    for (std::size_t j = 0; j < cols && !label_index; ++j) {
      for (const auto& row : table.rows) {
        if (!parse_number(row[j])) {
          label_index = j;
          break;
        }
      }
    }
  }

  const auto n = static_cast<Eigen::Index>(table.rows.size());
  const auto p = static_cast<Eigen::Index>(cols - (label_index ? 1 : 0));
  if (p < 1) throw InputError("CSV input has no numeric columns");
  Eigen::MatrixXd x(n, p);
  std::vector<std::string> labels;
  std::vector<std::string> variables;
  for (std::size_t j = 0; j < cols; ++j) {
    if (!label_index || j != *label_index) variables.push_back(table.header[j]);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = table.rows[static_cast<std::size_t>(i)];
    Eigen::Index k = 0;
    for (std::size_t j = 0; j < cols; ++j) {
      if (label_index && j == *label_index) {
        labels.push_back(row[j]);
        continue;
      }
      const auto v = parse_number(row[j]);
      if (!v) {
        throw InputError("row " + std::to_string(i + 1) + ", column '" + table.header[j] +
                         "': '" + row[j] + "' is not a number");
      }
      x(i, k++) = *v;
    }
  }
  return Dataset{Configuration(std::move(x), std::move(labels)), std::move(variables)};
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace affred
