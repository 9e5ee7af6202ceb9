#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "affred/baselines.h"
#include "affred/canonical.h"
#include "affred/optimizer.h"

namespace affred {

/// Everything a CLI run needs. Exactly one of `input` / `fixture` is set.
struct RunConfig {
  std::string input;
  std::string fixture;
  std::string label_column;
  /// mean | point:<i> | median | file:<path>
  std::string gamma = "mean";
  Eigen::Index q = 2;
  double rank_tol = kDefaultRankTolerance;
  SearchOptions search;
  std::filesystem::path out_dir = ".";
  bool plot_radius_size = false;
  bool axis_arrows = true;
  bool weighted = false;
  Standardization standardization = Standardization::kCorrelation;

  void validate() const;
  /// Echo of the result-affecting settings. Worker count and output
  /// directory are left out so reports from different runs compare equal.
  nlohmann::json echo() const;
};

struct MinimumSummary {
  double value = 0.0;
  double start_value = 0.0;
  double gradient_norm = 0.0;
  int start_id = 0;
  int iterations = 0;
  bool converged = false;
  int hits = 0;
  Eigen::MatrixXd b;
};

struct ReductionSummary {
  double value = 0.0;
  Eigen::MatrixXd b;
  Eigen::MatrixXd z;
  std::vector<MinimumSummary> local_minima;
  int starts_used = 0;
  int unconverged_starts = 0;
  bool rank_deficient = false;
};

struct PcaSummary {
  std::string standardization;
  Eigen::MatrixXd scores;
  Eigen::MatrixXd loadings;
  Eigen::VectorXd singular_values;
  Eigen::VectorXd explained_fraction;
};

struct SwarmSummary {
  Eigen::VectorXd radii;
  double min_radius = 0.0;
  double max_radius = 0.0;
  Eigen::VectorXd angles;
  std::vector<std::string> angular_order;
};

struct AxesSummary {
  std::vector<std::string> variables;
  Eigen::MatrixXd directions;
  Eigen::VectorXd norms;
  std::vector<bool> defined;
};

struct RunReport {
  std::string run_id;
  std::string command;
  nlohmann::json config;
  std::uint64_t seed = 0;
  std::vector<std::string> labels;
  std::optional<Eigen::Index> rank;
  std::optional<Eigen::VectorXd> lambda_sqrt;
  std::optional<ReductionSummary> reduction;
  std::optional<SwarmSummary> swarm;
  std::optional<AxesSummary> reduction_axes;
  std::optional<PcaSummary> pca;
  std::optional<AxesSummary> pca_axes;
  /// Execution details; not reproducible and excluded from comparisons.
  double wall_seconds = 0.0;
  unsigned workers = 0;
};

ReductionSummary summarize(const ReductionResult& r);
SwarmSummary summarize(const SwarmStats& s);
PcaSummary summarize(const PcaResult& p, Standardization mode);
AxesSummary summarize(const VariableAxes& a, const std::vector<std::string>& variables);

void to_json(nlohmann::json& j, const RunReport& r);
void from_json(const nlohmann::json& j, RunReport& r);

/// The report's JSON with the "execution" block removed.
nlohmann::json reproducible_part(const nlohmann::json& report);

/// Hex CRC-32 of the config echo: identical configs share a run id.
std::string make_run_id(const nlohmann::json& echo);

}  // namespace affred
