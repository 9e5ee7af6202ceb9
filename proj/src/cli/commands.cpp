#include "affred/commands.h"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "affred/errors.h"
#include "affred/fixtures.h"
#include "affred/svg.h"

namespace affred {

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out << text;
}

void write_json(const std::filesystem::path& path, const json& j) {
  write_file(path, j.dump(2) + "\n");
}

void write_matrix_csv(const std::filesystem::path& path, const std::string& prefix,
                      const std::vector<std::string>& labels, const Eigen::MatrixXd& m) {
  std::ostringstream out;
  out << "label";
  for (Eigen::Index j = 0; j < m.cols(); ++j) out << ',' << prefix << j + 1;
  out << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out << labels[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << ',' << fmt17(m(i, j));
    out << '\n';
  }
  write_file(path, out.str());
}

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<double> as_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

std::vector<std::string> labels_of(const Configuration& c) {
  std::vector<std::string> out;
  for (Eigen::Index i = 0; i < c.n(); ++i) out.push_back(c.label(i));
  return out;
}

void prepare_out_dir(const RunConfig& cfg) {
  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  if (ec) throw InputError("cannot create output directory '" + cfg.out_dir.string() + "'");
}

/// Input after optional standardization and deduplication, with its centring
/// vector and canonical form.
struct Prepared {
  Dataset data;
  Configuration points;
  CanonicalForm cf;
};

Prepared prepare(const RunConfig& cfg, bool standardize_first) {
  Prepared out{load_input(cfg), {}, {}};
  Configuration points = out.data.points;
  if (standardize_first) points = standardize(points, Standardization::kCorrelation);
  const CenteringVector gamma = resolve_gamma(cfg.gamma, points);
  if (cfg.weighted) {
    std::vector<Eigen::Index> row_of;
    Configuration merged = dedup_weighted(points, &row_of);
    Eigen::VectorXd g = Eigen::VectorXd::Zero(merged.n());
    for (Eigen::Index i = 0; i < points.n(); ++i) g[row_of[i]] += gamma[i];
    // Re-summing can drift by an ulp or two; restore the exact total.
    g[0] += 1.0 - g.sum();
    out.cf = canonical_form_weighted(merged, CenteringVector(std::move(g)), cfg.rank_tol);
    out.points = std::move(merged);
  } else {
    out.cf = canonical_form(points, gamma, cfg.rank_tol);
    out.points = std::move(points);
  }
  return out;
}

RunReport new_report(const RunConfig& cfg, const std::string& command) {
  RunReport r;
  r.command = command;
  r.config = cfg.echo();
  r.config["command"] = command;
  r.run_id = make_run_id(r.config);
  r.seed = cfg.search.seed;
  r.workers = cfg.search.workers != 0 ? cfg.search.workers : std::thread::hardware_concurrency();
  return r;
}

std::vector<std::string> legend_for(const RunConfig& cfg, Eigen::Index q) {
  return {"gamma: " + cfg.gamma, "q: " + std::to_string(q),
          "seed: " + std::to_string(cfg.search.seed)};
}

svg::Panel reduction_panel(const std::string& title, const Eigen::MatrixXd& z,
                           const std::vector<std::string>& labels, const SwarmStats& swarm,
                           bool radius_size) {
  svg::Panel panel;
  panel.title = title;
  panel.origin_marker = true;
  panel.number_line = z.cols() == 1;
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    svg::Point p;
    p.x = z(i, 0);
    p.y = z.cols() > 1 ? z(i, 1) : 0.0;
    p.label = labels[static_cast<std::size_t>(i)];
    // Marker area proportional to recovered radius.
    if (radius_size && swarm.max_radius > 0.0) p.area = 2.0 * swarm.radii[i] / swarm.max_radius;
    panel.points.push_back(std::move(p));
  }
  if (z.cols() >= 2) panel.rings = {swarm.min_radius, swarm.max_radius};
  return panel;
}

void add_arrows(svg::Panel& panel, const Eigen::MatrixXd& rows,
                const std::vector<std::string>& names) {
  if (rows.cols() < 2) return;
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    panel.arrows.push_back({rows(i, 0), rows(i, 1), names[static_cast<std::size_t>(i)]});
  }
}

/// Loading rows as unit directions, for the biplot arrows.
VariableAxes loading_axes(const Eigen::MatrixXd& loadings) {
  VariableAxes axes;
  axes.directions = loadings;
  axes.norms = loadings.rowwise().norm();
  axes.defined.assign(static_cast<std::size_t>(loadings.rows()), false);
  for (Eigen::Index i = 0; i < loadings.rows(); ++i) {
    if (axes.norms[i] < 1e-12) {
      axes.directions.row(i).setZero();
      continue;
    }
    axes.directions.row(i) /= axes.norms[i];
    axes.defined[static_cast<std::size_t>(i)] = true;
  }
  return axes;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

Dataset load_input(const RunConfig& cfg) {
  cfg.validate();
  if (!cfg.fixture.empty()) {
    if (cfg.fixture == "hexagon") return Dataset{hexagon_h(), {"H1", "H2"}};
    if (cfg.fixture == "grid6") return Dataset{grid6_h(), {"H1", "H2"}};
    if (cfg.fixture == "longley") return longley();
    throw InputError("unknown fixture '" + cfg.fixture + "' (hexagon, grid6, longley)");
  }
  return dataset_from_csv(parse_csv(read_text_file(cfg.input)), cfg.label_column);
}

CenteringVector resolve_gamma(const std::string& mode, const Configuration& c) {
  if (mode == "mean") return mean_gamma(c.n());
  if (mode == "median") return affine_median_gamma(c).gamma;
  if (mode.rfind("point:", 0) == 0) {
    const auto index = parse_number(mode.substr(6));
    if (!index || *index != static_cast<double>(static_cast<Eigen::Index>(*index))) {
      throw InputError("bad point index in --gamma " + mode);
    }
    return point_gamma(c.n(), static_cast<Eigen::Index>(*index));
  }
  if (mode.rfind("file:", 0) == 0) {
    std::string text = read_text_file(mode.substr(5));
    for (char& ch : text) {
      if (ch == ',' || ch == ';') ch = ' ';
    }
    std::istringstream in(text);
    std::vector<double> values;
    std::string token;
    while (in >> token) {
      const auto v = parse_number(token);
      if (!v) throw InputError("gamma file entry '" + token + "' is not a number");
      values.push_back(*v);
    }
    if (static_cast<Eigen::Index>(values.size()) != c.n()) {
      throw InputError("gamma file has " + std::to_string(values.size()) + " entries for " +
                       std::to_string(c.n()) + " points");
    }
    return CenteringVector(Eigen::Map<const Eigen::VectorXd>(values.data(), c.n()));
  }
  throw InputError("unknown --gamma mode '" + mode + "'");
}

json cmd_canonize(const RunConfig& cfg) {
  prepare_out_dir(cfg);
  const Prepared prep = prepare(cfg, false);
  const CanonicalForm& cf = prep.cf;
  const auto labels = labels_of(prep.points);
  const Eigen::MatrixXd centered = center(prep.points.coords(), cf.gamma);

  json doc = {{"command", "canonize"},
              {"config", cfg.echo()},
              {"labels", labels},
              {"variables", prep.data.variables},
              {"rank", cf.rank},
              {"lambda_sqrt", as_std(cf.lambda_sqrt)},
              {"g_t", matrix_json(cf.g_t)},
              {"gamma", as_std(cf.gamma.values())},
              {"h", matrix_json(cf.h)},
              {"centered", matrix_json(centered)}};
  if (cf.weighted()) doc["weights"] = as_std(cf.row_weights);
  write_json(cfg.out_dir / "canonical.json", doc);
  write_matrix_csv(cfg.out_dir / "h.csv", "h", labels, cf.h);
  write_matrix_csv(cfg.out_dir / "centered.csv", "x", labels, centered);
  return doc;
}

RunReport cmd_reduce(const RunConfig& cfg) {
  const auto start = Clock::now();
  prepare_out_dir(cfg);
  const Prepared prep = prepare(cfg, false);
  const CanonicalForm& cf = prep.cf;
  if (cfg.q >= cf.rank) {
    throw InputError("--q " + std::to_string(cfg.q) + " must be below the canonical rank " +
                     std::to_string(cf.rank));
  }
  const ReductionResult red = reduce(cf, cfg.q, cfg.search);
  const auto labels = labels_of(prep.points);
  const SwarmStats swarm = swarm_stats(red.z, labels);

  RunReport report = new_report(cfg, "reduce");
  report.labels = labels;
  report.rank = cf.rank;
  report.lambda_sqrt = cf.lambda_sqrt;
  report.reduction = summarize(red);
  report.swarm = summarize(swarm);
  report.reduction_axes = summarize(variable_axes(cf, red.b), prep.data.variables);

  svg::Panel panel = reduction_panel("Origin-centric reduction, Norm2 = " + fmt17(red.value),
                                     red.z, labels, swarm, cfg.plot_radius_size);
  if (cfg.axis_arrows) add_arrows(panel, report.reduction_axes->directions, prep.data.variables);
  write_file(cfg.out_dir / "reduce.svg", svg::render({panel}, legend_for(cfg, cfg.q)));
  write_matrix_csv(cfg.out_dir / "z.csv", "z", labels, red.z);

  report.wall_seconds = seconds_since(start);
  write_json(cfg.out_dir / "report.json", report);
  return report;
}

RunReport cmd_pca(const RunConfig& cfg) {
  const auto start = Clock::now();
  prepare_out_dir(cfg);
  const Dataset data = load_input(cfg);
  const Configuration std_points = standardize(data.points, cfg.standardization);
  const PcaResult result = pca(std_points, cfg.q);
  const auto labels = labels_of(data.points);

  RunReport report = new_report(cfg, "pca");
  report.labels = labels;
  report.pca = summarize(result, cfg.standardization);
  report.pca_axes = summarize(loading_axes(result.loadings), data.variables);

  svg::Panel panel;
  panel.title = "PCA (" + report.pca->standardization + " form)";
  panel.number_line = cfg.q == 1;
  for (Eigen::Index i = 0; i < result.scores.rows(); ++i) {
    panel.points.push_back({result.scores(i, 0), cfg.q > 1 ? result.scores(i, 1) : 0.0,
                            labels[static_cast<std::size_t>(i)], 1.0});
  }
  if (cfg.axis_arrows) add_arrows(panel, result.loadings, data.variables);
  write_file(cfg.out_dir / "pca.svg", svg::render({panel}, legend_for(cfg, cfg.q)));

  report.wall_seconds = seconds_since(start);
  write_json(cfg.out_dir / "pca.json", report);
  return report;
}

json cmd_median(const RunConfig& cfg) {
  prepare_out_dir(cfg);
  const Dataset data = load_input(cfg);
  const MedianResult med = affine_median_gamma(data.points);
  const Eigen::RowVectorXd location = med.gamma.values().transpose() * data.points.coords();
  json doc = {{"command", "median"},
              {"config", cfg.echo()},
              {"labels", labels_of(data.points)},
              {"gamma", as_std(med.gamma.values())},
              {"peel_stages", med.peel_stages},
              {"final_hull", med.final_hull},
              {"median", as_std(location.transpose())}};
  write_json(cfg.out_dir / "median.json", doc);
  return doc;
}

RunReport cmd_compare(const RunConfig& cfg) {
  const auto start = Clock::now();
  if (cfg.q != 2) throw InputError("compare draws planar panels and needs --q 2");
  prepare_out_dir(cfg);
  const Prepared prep = prepare(cfg, true);
  const CanonicalForm& cf = prep.cf;
  if (cfg.q >= cf.rank) {
    throw InputError("--q 2 needs canonical rank of at least 3, got " + std::to_string(cf.rank));
  }
  const ReductionResult red = reduce(cf, cfg.q, cfg.search);
  const auto labels = labels_of(prep.points);
  const SwarmStats swarm = swarm_stats(red.z, labels);
  const PcaResult pc = pca(standardize(prep.data.points, Standardization::kCorrelation), cfg.q);

  RunReport report = new_report(cfg, "compare");
  report.labels = labels;
  report.rank = cf.rank;
  report.lambda_sqrt = cf.lambda_sqrt;
  report.reduction = summarize(red);
  report.swarm = summarize(swarm);
  report.reduction_axes = summarize(variable_axes(cf, red.b), prep.data.variables);
  report.pca = summarize(pc, Standardization::kCorrelation);
  const VariableAxes pca_axes = loading_axes(pc.loadings);
  report.pca_axes = summarize(pca_axes, prep.data.variables);

  svg::Panel left;
  left.title = "PCA, correlation form";
  const auto input_labels = labels_of(prep.data.points);
  for (Eigen::Index i = 0; i < pc.scores.rows(); ++i) {
    left.points.push_back(
        {pc.scores(i, 0), pc.scores(i, 1), input_labels[static_cast<std::size_t>(i)], 1.0});
  }
  svg::Panel right = reduction_panel("Origin-centric, Norm2 = " + fmt17(red.value), red.z, labels,
                                     swarm, cfg.plot_radius_size);
  if (cfg.axis_arrows) {
    add_arrows(left, pca_axes.directions, prep.data.variables);
    add_arrows(right, report.reduction_axes->directions, prep.data.variables);
  }
  write_file(cfg.out_dir / "compare.svg", svg::render({left, right}, legend_for(cfg, cfg.q)));

  report.wall_seconds = seconds_since(start);
  write_json(cfg.out_dir / "compare.json", report);
  return report;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Origin-centric affine reduction of dimensionality", "affred"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string out_dir = ".";
  std::string standardization = "correlation";
  bool no_arrows = false;

  auto add_common = [&](CLI::App* sub, bool search) {
    auto* input = sub->add_option("--input", cfg.input, "CSV file with a header row");
    auto* fixture = sub->add_option("--fixture", cfg.fixture, "Built-in data: hexagon, grid6, longley");
    input->excludes(fixture);
    sub->add_option("--label-column", cfg.label_column, "Column holding point labels");
    sub->add_option("--out", out_dir, "Output directory");
    sub->add_option("--gamma", cfg.gamma, "mean | point:<i> | median | file:<path>");
    sub->add_option("--rank-tol", cfg.rank_tol, "Relative singular-value threshold");
    sub->add_flag("--weights", cfg.weighted, "Merge coincident points and weight by multiplicity");
    sub->add_option("--q", cfg.q, "Target dimension");
    if (search) {
      sub->add_option("--starts", cfg.search.n_starts, "Random starts");
      sub->add_option("--angle-starts", cfg.search.angle_starts, "Angle-grid starts (r=2, q=1)");
      sub->add_option("--seed", cfg.search.seed, "Random seed");
      sub->add_option("--max-iter", cfg.search.max_iterations, "Iterations per start");
      sub->add_option("--workers", cfg.search.workers, "Threads (0 = all cores)");
      sub->add_flag("--plot-radius-size", cfg.plot_radius_size, "Marker area follows radius");
      sub->add_flag("--no-axis-arrows", no_arrows, "Omit variable arrows");
    }
  };

  auto* canonize = app.add_subcommand("canonize", "Write the canonical form H, singular values and G'");
  add_common(canonize, false);
  auto* reduce_cmd = app.add_subcommand("reduce", "Minimize Norm2 over rank-q affine images");
  add_common(reduce_cmd, true);
  auto* pca_cmd = app.add_subcommand("pca", "Principal components baseline with biplot");
  add_common(pca_cmd, false);
  pca_cmd->add_option("--standardize", standardization, "mean | correlation")
      ->check(CLI::IsMember({"mean", "correlation"}));
  pca_cmd->add_flag("--no-axis-arrows", no_arrows, "Omit loading arrows");
  auto* median_cmd = app.add_subcommand("median", "Convex-hull peeling median weights");
  add_common(median_cmd, false);
  auto* compare_cmd = app.add_subcommand("compare", "PCA and origin-centric panels side by side");
  add_common(compare_cmd, true);

  auto report_error = [&](const char* kind, const std::string& message, int code) {
    err << json{{"error", {{"type", kind}, {"message", message}, {"exit_code", code}}}}.dump()
        << '\n';
    return code;
  };

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    return report_error("usage", e.what(), 2);
  }

  cfg.out_dir = out_dir;
  cfg.axis_arrows = !no_arrows;
  cfg.standardization =
      standardization == "mean" ? Standardization::kMean : Standardization::kCorrelation;
  try {
    if (canonize->parsed()) {
      const json doc = cmd_canonize(cfg);
      out << "rank " << doc["rank"].get<int>() << " written to " << cfg.out_dir.string() << '\n';
    } else if (reduce_cmd->parsed()) {
      const RunReport r = cmd_reduce(cfg);
      out << "Norm2 " << fmt17(r.reduction->value) << " from " << r.reduction->local_minima.size()
          << " distinct minima\n";
    } else if (pca_cmd->parsed()) {
      const RunReport r = cmd_pca(cfg);
      out << "explained " << fmt17(r.pca->explained_fraction.sum()) << '\n';
    } else if (median_cmd->parsed()) {
      const json doc = cmd_median(cfg);
      out << "final hull of " << doc["final_hull"].size() << " point(s)\n";
    } else if (compare_cmd->parsed()) {
      const RunReport r = cmd_compare(cfg);
      out << "Norm2 " << fmt17(r.reduction->value) << ", min radius "
          << fmt17(r.swarm->min_radius) << '\n';
    }
  } catch (const InputError& e) {
    return report_error("input_error", e.what(), 2);
  } catch (const LoadError& e) {
    return report_error("load_error", e.what(), 2);
  } catch (const std::exception& e) {
    return report_error("internal_error", e.what(), 1);
  }
  return 0;
}

}  // namespace affred
