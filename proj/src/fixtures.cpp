#include "affred/fixtures.h"

#include <cmath>
#include <cstdio>
#include <numbers>

#include <zlib.h>

#include "affred/errors.h"

#ifndef AFFRED_DATA_DIR
#define AFFRED_DATA_DIR "data"
#endif

namespace affred {

Configuration hexagon_h() {
  Eigen::MatrixXd x(6, 2);
  const double radius = 1.0 / std::sqrt(3.0);
  for (int k = 0; k < 6; ++k) {
    const double angle = k * std::numbers::pi / 3.0;
    x(k, 0) = radius * std::cos(angle);
    x(k, 1) = radius * std::sin(angle);
  }
  return Configuration(std::move(x), {"P1", "P2", "P3", "P4", "P5", "P6"});
}

Configuration grid6_h() {
  Eigen::MatrixXd x(6, 2);
  const double row = 1.0 / std::sqrt(6.0);
  x << -0.5, -row,
        0.0, -row,
        0.5, -row,
       -0.5,  row,
        0.0,  row,
        0.5,  row;
  return Configuration(std::move(x), {"A1", "A2", "A3", "B1", "B2", "B3"});
}

std::filesystem::path default_longley_path() {
  return std::filesystem::path(AFFRED_DATA_DIR) / "longley.csv";
}

Dataset longley(const std::filesystem::path& csv) {
  std::string text;
  try {
    text = read_text_file(csv);
  } catch (const InputError& e) {
    throw LoadError("Longley data: " + std::string(e.what()));
  }
  const auto crc = static_cast<std::uint32_t>(
      crc32(0L, reinterpret_cast<const Bytef*>(text.data()), static_cast<uInt>(text.size())));
  if (crc != kLongleyCrc32) {
    char detail[96];
    std::snprintf(detail, sizeof detail, "checksum mismatch: crc32 %08x, expected %08x", crc,
                  kLongleyCrc32);
    throw LoadError("Longley data '" + csv.string() + "': " + detail);
  }
  Dataset data = dataset_from_csv(parse_csv(text), "YEAR");
  if (data.points.n() != 16 || data.points.p() != 6) {
    throw LoadError("Longley data has unexpected shape");
  }
  return data;
}

void FixtureRegistry::add(Fixture fixture) {
  if (fixtures_.contains(fixture.name)) {
    throw InputError("fixture '" + fixture.name + "' already registered");
  }
  std::string name = fixture.name;
  fixtures_.emplace(std::move(name), std::move(fixture));
}

bool FixtureRegistry::contains(const std::string& name) const { return fixtures_.contains(name); }

const Fixture& FixtureRegistry::get(const std::string& name) const {
  const auto it = fixtures_.find(name);
  if (it == fixtures_.end()) throw InputError("unknown fixture '" + name + "'");
  return it->second;
}

std::vector<std::string> FixtureRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : fixtures_) out.push_back(name);
  return out;
}

void FixtureRegistry::register_expected(const std::string& name, const std::string& key,
                                        double value, const std::string& provenance) {
  auto it = fixtures_.find(name);
  if (it == fixtures_.end()) throw InputError("unknown fixture '" + name + "'");
  if (!it->second.expected.emplace(key, ExpectedValue{value, provenance}).second) {
    throw InputError("fixture '" + name + "' already has a value for '" + key + "'");
  }
}

std::optional<ExpectedValue> FixtureRegistry::expected(const std::string& name,
                                                       const std::string& key) const {
  const auto it = fixtures_.find(name);
  if (it == fixtures_.end()) return std::nullopt;
  const auto found = it->second.expected.find(key);
  if (found == it->second.expected.end()) return std::nullopt;
  return found->second;
}

FixtureRegistry builtin_fixtures() {
  FixtureRegistry reg;
  reg.add({"hexagon", Dataset{hexagon_h(), {"H1", "H2"}}, {}});
  reg.add({"grid6", Dataset{grid6_h(), {"H1", "H2"}}, {}});
  reg.add({"longley", longley(), {}});

  reg.register_expected("hexagon", "q1_global_norm2", 8.0,
                        "angle x scale grid oracle (0.5 deg x 0.005) with closed-form polish; "
                        "flat in direction");
  reg.register_expected("grid6", "q1_global_norm2", 56.0 / 9.0,
                        "angle x scale grid oracle; triplet of pairs");
  reg.register_expected("grid6", "q1_second_norm2", 7.0,
                        "angle x scale grid oracle; pair of triplets");
  reg.register_expected("grid6", "q1_minimum_count", 2.0,
                        "local minima of the profiled direction curve on [0, pi)");
  reg.register_expected("longley", "q2_norm2", 38.39128137003816,
                        "first converged compare run: correlation form, mean centring, "
                        "100 starts, seed 1; unchanged at 2000 starts");
  reg.register_expected("longley", "q2_min_radius", 0.30962291865183866,
                        "same run as q2_norm2; smallest recovered variable-point radius");
  return reg;
}

}  // namespace affred
