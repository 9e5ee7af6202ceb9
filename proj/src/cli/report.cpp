#include "affred/report.h"

#include <cstdio>

#include <zlib.h>

#include "affred/errors.h"

namespace affred {

using nlohmann::json;

namespace {

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from(const json& j) {
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows == 0 ? Eigen::Index{0} : static_cast<Eigen::Index>(j.at(0).size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (static_cast<Eigen::Index>(j.at(i).size()) != cols) throw InputError("ragged matrix in report");
    for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = j.at(i).at(c).get<double>();
  }
  return m;
}

json vector_json(const Eigen::VectorXd& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

Eigen::VectorXd vector_from(const json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

json axes_json(const AxesSummary& a) {
  return {{"variables", a.variables},
          {"directions", matrix_json(a.directions)},
          {"norms", vector_json(a.norms)},
          {"defined", a.defined}};
}

AxesSummary axes_from(const json& j) {
  AxesSummary a;
  a.variables = j.at("variables").get<std::vector<std::string>>();
  a.directions = matrix_from(j.at("directions"));
  a.norms = vector_from(j.at("norms"));
  a.defined = j.at("defined").get<std::vector<bool>>();
  return a;
}

}  // namespace

void RunConfig::validate() const {
  if (input.empty() == fixture.empty()) {
    throw InputError("exactly one of --input or --fixture is required");
  }
  if (q < 1) throw InputError("--q must be at least 1");
  if (!(rank_tol > 0.0 && rank_tol < 1.0)) throw InputError("--rank-tol must lie in (0, 1)");
  search.validate();
}

json RunConfig::echo() const {
  return {{"input", input},
          {"fixture", fixture},
          {"label_column", label_column},
          {"gamma", gamma},
          {"q", q},
          {"rank_tol", rank_tol},
          {"weighted", weighted},
          {"standardization",
           standardization == Standardization::kMean ? "mean" : "correlation"},
          {"search",
           {{"n_starts", search.n_starts},
            {"angle_starts", search.angle_starts},
            {"seed", search.seed},
            {"max_iterations", search.max_iterations},
            {"gradient_tolerance", search.gradient_tolerance},
            {"value_dedup_tolerance", search.value_dedup_tolerance},
            {"gram_dedup_tolerance", search.gram_dedup_tolerance},
            {"scale_grid", search.scale_grid}}},
          {"plot", {{"radius_size", plot_radius_size}, {"axis_arrows", axis_arrows}}}};
}

ReductionSummary summarize(const ReductionResult& r) {
  ReductionSummary s;
  s.value = r.value;
  s.b = r.b;
  s.z = r.z;
  s.starts_used = r.starts_used;
  s.unconverged_starts = r.unconverged_starts;
  s.rank_deficient = r.rank_deficient;
  for (const auto& m : r.local_minima) {
    s.local_minima.push_back(MinimumSummary{m.value, m.start_value, m.gradient_norm, m.start_id,
                                            m.iterations, m.converged, m.hits, m.b});
  }
  return s;
}

SwarmSummary summarize(const SwarmStats& s) {
  return SwarmSummary{s.radii, s.min_radius, s.max_radius, s.angles, s.angular_order};
}

PcaSummary summarize(const PcaResult& p, Standardization mode) {
  return PcaSummary{mode == Standardization::kMean ? "mean" : "correlation", p.scores, p.loadings,
                    p.singular_values, p.explained_fraction};
}

AxesSummary summarize(const VariableAxes& a, const std::vector<std::string>& variables) {
  return AxesSummary{variables, a.directions, a.norms, a.defined};
}

void to_json(json& j, const RunReport& r) {
  j = json{{"run_id", r.run_id},
           {"command", r.command},
           {"config", r.config},
           {"seed", r.seed},
           {"labels", r.labels},
           {"execution", {{"wall_seconds", r.wall_seconds}, {"workers", r.workers}}}};
  if (r.rank) {
    j["canonical"] = {{"rank", *r.rank}};
    if (r.lambda_sqrt) j["canonical"]["lambda_sqrt"] = vector_json(*r.lambda_sqrt);
  }
  if (r.reduction) {
    const auto& red = *r.reduction;
    json minima = json::array();
    for (const auto& m : red.local_minima) {
      minima.push_back({{"value", m.value},
                        {"start_value", m.start_value},
                        {"gradient_norm", m.gradient_norm},
                        {"start_id", m.start_id},
                        {"iterations", m.iterations},
                        {"converged", m.converged},
                        {"hits", m.hits},
                        {"b", matrix_json(m.b)}});
    }
    j["reduction"] = {{"norm2", red.value},
                      {"b", matrix_json(red.b)},
                      {"z", matrix_json(red.z)},
                      {"local_minima", std::move(minima)},
                      {"starts_used", red.starts_used},
                      {"unconverged_starts", red.unconverged_starts},
                      {"rank_deficient", red.rank_deficient}};
  }
  if (r.swarm) {
    j["swarm"] = {{"radii", vector_json(r.swarm->radii)},
                  {"min_radius", r.swarm->min_radius},
                  {"max_radius", r.swarm->max_radius},
                  {"angles", vector_json(r.swarm->angles)},
                  {"angular_order", r.swarm->angular_order}};
  }
  if (r.reduction_axes) j["reduction_axes"] = axes_json(*r.reduction_axes);
  if (r.pca) {
    j["pca"] = {{"standardization", r.pca->standardization},
                {"scores", matrix_json(r.pca->scores)},
                {"loadings", matrix_json(r.pca->loadings)},
                {"singular_values", vector_json(r.pca->singular_values)},
                {"explained_fraction", vector_json(r.pca->explained_fraction)}};
  }
  if (r.pca_axes) j["pca_axes"] = axes_json(*r.pca_axes);
}

void from_json(const json& j, RunReport& r) {
  r = RunReport{};
  r.run_id = j.at("run_id").get<std::string>();
  r.command = j.at("command").get<std::string>();
  r.config = j.at("config");
  r.seed = j.at("seed").get<std::uint64_t>();
  r.labels = j.at("labels").get<std::vector<std::string>>();
  r.wall_seconds = j.at("execution").at("wall_seconds").get<double>();
  r.workers = j.at("execution").at("workers").get<unsigned>();
  if (j.contains("canonical")) {
    r.rank = j["canonical"].at("rank").get<Eigen::Index>();
    if (j["canonical"].contains("lambda_sqrt")) r.lambda_sqrt = vector_from(j["canonical"]["lambda_sqrt"]);
  }
  if (j.contains("reduction")) {
    const json& red = j["reduction"];
    ReductionSummary s;
    s.value = red.at("norm2").get<double>();
    s.b = matrix_from(red.at("b"));
    s.z = matrix_from(red.at("z"));
    s.starts_used = red.at("starts_used").get<int>();
    s.unconverged_starts = red.at("unconverged_starts").get<int>();
    s.rank_deficient = red.at("rank_deficient").get<bool>();
    for (const auto& m : red.at("local_minima")) {
      s.local_minima.push_back(MinimumSummary{
          m.at("value").get<double>(), m.at("start_value").get<double>(),
          m.at("gradient_norm").get<double>(), m.at("start_id").get<int>(),
          m.at("iterations").get<int>(), m.at("converged").get<bool>(), m.at("hits").get<int>(),
          matrix_from(m.at("b"))});
    }
    r.reduction = std::move(s);
  }
  if (j.contains("swarm")) {
    const json& sw = j["swarm"];
    r.swarm = SwarmSummary{vector_from(sw.at("radii")), sw.at("min_radius").get<double>(),
                           sw.at("max_radius").get<double>(), vector_from(sw.at("angles")),
                           sw.at("angular_order").get<std::vector<std::string>>()};
  }
  if (j.contains("reduction_axes")) r.reduction_axes = axes_from(j["reduction_axes"]);
  if (j.contains("pca")) {
    const json& p = j["pca"];
    r.pca = PcaSummary{p.at("standardization").get<std::string>(), matrix_from(p.at("scores")),
                       matrix_from(p.at("loadings")), vector_from(p.at("singular_values")),
                       vector_from(p.at("explained_fraction"))};
  }
  if (j.contains("pca_axes")) r.pca_axes = axes_from(j["pca_axes"]);
}

json reproducible_part(const json& report) {
  json out = report;
  out.erase("execution");
  return out;
}

std::string make_run_id(const json& echo) {
  const std::string text = echo.dump();
  const auto crc = crc32(0L, reinterpret_cast<const Bytef*>(text.data()),
                         static_cast<uInt>(text.size()));
  char buf[16];
  std::snprintf(buf, sizeof buf, "%08lx", static_cast<unsigned long>(crc));
  return buf;
}

}  // namespace affred
