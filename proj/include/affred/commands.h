#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "affred/centering.h"
#include "affred/csv.h"
#include "affred/report.h"

namespace affred {

/// Reads the configured CSV file or built-in fixture.
Dataset load_input(const RunConfig& cfg);

/// Parses a --gamma value against configuration `c`: mean, point:<i>
/// (0-based), median, or file:<path> holding N numbers separated by commas or
/// whitespace.
CenteringVector resolve_gamma(const std::string& mode, const Configuration& c);

/// Writes canonical.json, h.csv and centered.csv. Returns the JSON document.
nlohmann::json cmd_canonize(const RunConfig& cfg);
/// Writes report.json, z.csv and reduce.svg.
RunReport cmd_reduce(const RunConfig& cfg);
/// Writes pca.json and pca.svg.
RunReport cmd_pca(const RunConfig& cfg);
/// Writes median.json.
nlohmann::json cmd_median(const RunConfig& cfg);
/// Writes compare.json and compare.svg. Requires q = 2.
RunReport cmd_compare(const RunConfig& cfg);

/// Full command line front end. Returns the process exit code: 0 on success,
/// 2 for input or configuration errors, 1 for anything else. Errors are
/// reported as a JSON object on `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace affred
