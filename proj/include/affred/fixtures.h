#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "affred/csv.h"
#include "affred/geometry.h"

namespace affred {

/// Regular hexagon of radius 1/sqrt(3): a canonical form in its own right
/// (column sums zero, H'H = I). Its fourth moments are isotropic, so the q=1
/// landscape is flat in direction.
Configuration hexagon_h();

/// Six points on a 2 x 3 lattice, put in canonical form: columns (-1,0,1)/2
/// and (+-1)/sqrt(6). Projecting to q=1 gives two local minima, the "pair of
/// triplets" (value 7) and the "triplet of pairs" (value 56/9, two points on
/// the origin).
Configuration grid6_h();

inline constexpr std::uint32_t kLongleyCrc32 = 0xf1c1144au;

std::filesystem::path default_longley_path();

/// The 16 x 6 Longley table (GNP deflator, GNP, unemployed, armed forces,
/// population, employed), points labeled by year. Throws LoadError when the
/// file is missing or its CRC-32 differs from kLongleyCrc32.
Dataset longley(const std::filesystem::path& csv = default_longley_path());

struct ExpectedValue {
  double value = 0.0;
  std::string provenance;
};

struct Fixture {
  std::string name;
  Dataset data;
  std::map<std::string, ExpectedValue> expected;
};

class FixtureRegistry {
 public:
  /// Throws InputError if the name is taken.
  void add(Fixture fixture);
  bool contains(const std::string& name) const;
  /// Throws InputError for an unknown name.
  const Fixture& get(const std::string& name) const;
  std::vector<std::string> names() const;

  /// Throws InputError for an unknown fixture or an existing key.
  void register_expected(const std::string& name, const std::string& key, double value,
                         const std::string& provenance);
  std::optional<ExpectedValue> expected(const std::string& name, const std::string& key) const;

 private:
  std::map<std::string, Fixture> fixtures_;
};

/// hexagon, grid6 and longley with their frozen oracle values.
FixtureRegistry builtin_fixtures();

}  // namespace affred
