#include <cmath>
#include <numbers>
#include <random>

#include <doctest.h>

#include "affred/baselines.h"
#include "affred/errors.h"
#include "affred/fixtures.h"
#include "affred/optimizer.h"
#include "oracles.h"

using namespace affred;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

CanonicalForm as_form(const Configuration& h) { return canonical_form(h, mean_gamma(h.n())); }

// Profiled q = 1 objective minimized over many random directions in r-space:
// each direction gets its exact best scale from the quartic.
double direction_sampling_minimum(const MatrixXd& h, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < samples; ++k) {
    VectorXd u = oracle::random_matrix(rng, h.cols(), 1);
    u.normalize();
    best = std::min(best, oracle::ray_minimum(h, u).value);
  }
  return best;
}

}  // namespace

TEST_SUITE("optimizer") {

TEST_CASE("angle starts") {
  const auto two = angle_starts(2);
  REQUIRE(two.size() == 2);
  CHECK((two[0] - Eigen::Vector2d(0, 1)).norm() <= 1e-15);
  CHECK((two[1] - Eigen::Vector2d(1, 0)).norm() <= 1e-15);
  const auto four = angle_starts(4);
  CHECK((four[1] - Eigen::Vector2d(std::sqrt(0.5), std::sqrt(0.5))).norm() <= 1e-15);
  for (const auto& s : angle_starts(36)) CHECK(s.norm() == doctest::Approx(1.0));
  CHECK_THROWS_AS(angle_starts(0), InputError);
}

TEST_CASE("random starts") {
  const std::vector<double> grid{0.25, 0.5, 0.75, 1.0};
  const auto a = random_starts(5, 2, 12, 42, grid);
  const auto b = random_starts(5, 2, 12, 42, grid);
  const auto c = random_starts(5, 2, 12, 43, grid);
  REQUIRE(a.size() == 12);
  bool differs = false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k] == b[k]);
    differs = differs || a[k] != c[k];
    const double s = grid[k % grid.size()];
    CHECK((a[k].transpose() * a[k] - s * s * MatrixXd::Identity(2, 2)).norm() <= 1e-12);
  }
  CHECK(differs);
  CHECK_THROWS_AS(random_starts(3, 3, 1, 1, grid), InputError);
  CHECK_THROWS_AS(random_starts(3, 0, 1, 1, grid), InputError);
}

TEST_CASE("search options validation") {
  SearchOptions o;
  CHECK_NOTHROW(o.validate());
  o.max_iterations = 0;
  CHECK_THROWS_AS(o.validate(), InputError);
  o = {};
  o.gradient_tolerance = 0.0;
  CHECK_THROWS_AS(o.validate(), InputError);
  o = {};
  o.scale_grid = {};
  CHECK_THROWS_AS(o.validate(), InputError);
  o = {};
  o.n_starts = 0;
  o.angle_starts = 0;
  CHECK_THROWS_AS(o.validate(), InputError);
}

TEST_CASE("local search from an orthogonal square B stops at zero") {
  std::mt19937_64 rng(1);
  const MatrixXd h = oracle::random_h(rng, mean_gamma(8).values(), 3);
  const MatrixXd q = Eigen::HouseholderQR<MatrixXd>(oracle::random_matrix(rng, 3, 3)).householderQ();
  const LocalMinimum m = local_minimize(h, q, SearchOptions{});
  CHECK(m.converged);
  CHECK(m.value <= 1e-20);
  CHECK(m.iterations == 0);
}

TEST_CASE("local search along a ray matches the quartic oracle") {
  for (const Configuration& fixture : {hexagon_h(), grid6_h()}) {
    const MatrixXd h = fixture.coords();
    for (double phi : {0.0, 0.4, std::numbers::pi / 2}) {
      const Eigen::Vector2d u = oracle::direction(phi);
      const LocalMinimum m = local_minimize(h, MatrixXd(u), SearchOptions{});
      CHECK(m.converged);
      CHECK(m.value <= m.start_value);
      // Starting exactly on a critical direction the search stays on the ray.
      if (phi != 0.4) CHECK(std::abs(m.value - oracle::ray_minimum(h, u).value) <= 1e-8);
    }
  }
  // The hexagon is flat in direction, so every ray gives the same value.
  const MatrixXd hex = hexagon_h().coords();
  const LocalMinimum m = local_minimize(hex, MatrixXd(oracle::direction(0.4)), SearchOptions{});
  CHECK(std::abs(m.value - oracle::ray_minimum(hex, oracle::direction(0.4)).value) <= 1e-8);
}

TEST_CASE("grid6 landscape: two minima, global matches the grid oracle") {
  const Configuration g = grid6_h();
  const oracle::GridResult grid = oracle::angle_scale_grid(g.coords());
  CHECK(grid.minima == 2);
  CHECK(grid.value == doctest::Approx(56.0 / 9).epsilon(1e-9));

  const ReductionResult r = reduce(as_form(g), 1, SearchOptions{});
  REQUIRE(r.local_minima.size() == 2);
  CHECK(std::abs(r.value - grid.value) <= 1e-6);
  CHECK(r.local_minima[0].value == doctest::Approx(56.0 / 9).epsilon(1e-9));
  CHECK(r.local_minima[1].value == doctest::Approx(7.0).epsilon(1e-9));
  CHECK(r.starts_used == 36 + 64);
  // The global solution puts two points (the middle column) on the origin.
  int on_origin = 0;
  for (Eigen::Index i = 0; i < 6; ++i) on_origin += std::abs(r.z(i, 0)) < 1e-6;
  CHECK(on_origin == 2);
}

TEST_CASE("hexagon landscape is flat at the grid oracle value") {
  const MatrixXd hex = hexagon_h().coords();
  const oracle::GridResult grid = oracle::angle_scale_grid(hex);
  CHECK(grid.value == doctest::Approx(8.0).epsilon(1e-9));
  CHECK(grid.minima == 0);
  const ReductionResult r = reduce(as_form(hexagon_h()), 1, SearchOptions{});
  CHECK(std::abs(r.value - grid.value) <= 1e-6);
  for (const auto& m : r.local_minima) CHECK(std::abs(m.value - 8.0) <= 1e-8);
}

TEST_CASE("simplex q=1 global value matches direction sampling") {
  const CanonicalForm cf = simplex_h(4, SimplexKind::kMeanCentered);
  const double sampled = direction_sampling_minimum(cf.h, 10000, 99);
  const ReductionResult r = reduce(cf, 1, SearchOptions{});
  CHECK(r.value <= sampled + 1e-9);
  CHECK(r.value >= sampled - 1e-3 * (1.0 + sampled));
}

TEST_CASE("catalog invariants") {
  std::mt19937_64 rng(2);
  const MatrixXd x = oracle::random_matrix(rng, 10, 4);
  const CanonicalForm cf = canonical_form(Configuration(x), mean_gamma(10));
  SearchOptions opts;
  opts.n_starts = 24;
  const ReductionResult r = reduce(cf, 2, opts);
  CHECK((r.z - cf.h * r.b).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK_FALSE(r.rank_deficient);
  CHECK(r.value == r.local_minima.front().value);
  int hits = 0;
  for (const auto& m : r.local_minima) {
    CHECK(m.converged);
    CHECK(m.value >= r.value);
    CHECK(m.value <= m.start_value);
    CHECK(m.gradient_norm < opts.gradient_tolerance * (1.0 + m.value));
    hits += m.hits;
  }
  CHECK(hits + r.unconverged_starts == r.starts_used);
  const Norm2Evaluator eval(cf.h);
  for (const auto& s : random_starts(4, 2, opts.n_starts, opts.seed, opts.scale_grid))
    CHECK(r.value <= eval.value(s));
}

TEST_CASE("reduce is deterministic across worker counts") {
  std::mt19937_64 rng(3);
  const CanonicalForm cf = canonical_form(Configuration(oracle::random_matrix(rng, 12, 4)), mean_gamma(12));
  SearchOptions one;
  one.n_starts = 16;
  one.workers = 1;
  SearchOptions many = one;
  many.workers = 4;
  const ReductionResult a = reduce(cf, 2, one);
  const ReductionResult b = reduce(cf, 2, many);
  CHECK(a.value == b.value);
  CHECK(a.b == b.b);
  REQUIRE(a.local_minima.size() == b.local_minima.size());
  for (std::size_t k = 0; k < a.local_minima.size(); ++k) {
    CHECK(a.local_minima[k].b == b.local_minima[k].b);
    CHECK(a.local_minima[k].start_id == b.local_minima[k].start_id);
    CHECK(a.local_minima[k].hits == b.local_minima[k].hits);
  }
}

TEST_CASE("null rows stay null") {
  std::mt19937_64 rng(4);
  const Configuration c = augment_origin(Configuration(oracle::random_matrix(rng, 8, 3)));
  const CanonicalForm cf = canonical_form(c, point_gamma(c.n(), c.n() - 1));
  CHECK(cf.h.row(8).norm() <= 1e-14);
  SearchOptions opts;
  opts.n_starts = 8;
  const ReductionResult r = reduce(cf, 2, opts);
  CHECK(r.z.row(8).norm() <= 1e-12);
  CHECK(r.z.row(0).norm() > 1e-3);
}

TEST_CASE("target dimension range") {
  const CanonicalForm cf = simplex_h(4, SimplexKind::kMeanCentered);
  SearchOptions opts;
  opts.n_starts = 4;
  CHECK_THROWS_AS(reduce(cf, 3, opts), InputError);
  CHECK_THROWS_AS(reduce(cf, 0, opts), InputError);
  CHECK_NOTHROW(reduce(cf, 2, opts));
}

TEST_CASE("canonicalize_b resolves the orthogonal gauge") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 10; ++t) {
    const MatrixXd b = oracle::random_matrix(rng, 5, 3);
    const MatrixXd q = Eigen::HouseholderQR<MatrixXd>(oracle::random_matrix(rng, 3, 3)).householderQ();
    const MatrixXd c = canonicalize_b(b);
    CHECK((canonicalize_b(b * q) - c).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK((c * c.transpose() - b * b.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((canonicalize_b(c) - c).cwiseAbs().maxCoeff() <= 1e-12);
    const MatrixXd ctc = c.transpose() * c;
    CHECK((ctc - MatrixXd(ctc.diagonal().asDiagonal())).cwiseAbs().maxCoeff() <= 1e-10);
    for (Eigen::Index k = 1; k < 3; ++k) CHECK(ctc(k, k) <= ctc(k - 1, k - 1));
  }
}

TEST_CASE("every Longley start reaches the gradient tolerance") {
  // Residuals cancel heavily here; the last steps need a stable value.
  const Configuration pts = standardize(longley().points, Standardization::kCorrelation);
  const CanonicalForm cf = as_form(pts);
  SearchOptions opts;
  const Norm2Evaluator eval(cf.h);
  for (const MatrixXd& b0 : random_starts(cf.rank, 2, 60, 7, opts.scale_grid)) {
    const LocalMinimum m = local_minimize(eval, b0, opts);
    CHECK(m.converged);
    CHECK(m.gradient_norm < opts.gradient_tolerance * (1.0 + m.value));
    CHECK(m.value <= m.start_value);
    CHECK(m.iterations < 300);
  }
}

}  // TEST_SUITE
