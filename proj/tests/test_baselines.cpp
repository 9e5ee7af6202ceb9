#include <cmath>
#include <numbers>
#include <random>

#include <doctest.h>

#include "affred/baselines.h"
#include "affred/errors.h"
#include "affred/fixtures.h"
#include "oracles.h"

using namespace affred;
using Eigen::MatrixXd;
using Eigen::VectorXd;

TEST_SUITE("baselines") {

TEST_CASE("standardize small column") {
  MatrixXd x(2, 1);
  x << 1, 3;
  const Configuration mean = standardize(Configuration(x), Standardization::kMean);
  CHECK(mean.coords()(0, 0) == -1.0);
  CHECK(mean.coords()(1, 0) == 1.0);
  const Configuration corr = standardize(Configuration(x), Standardization::kCorrelation);
  CHECK(corr.coords()(0, 0) == doctest::Approx(-1 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(corr.coords()(1, 0) == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("constant column is named in the error") {
  MatrixXd x(3, 2);
  x << 1, 5, 2, 5, 3, 5;
  CHECK_THROWS_WITH_AS(standardize(Configuration(x), Standardization::kCorrelation),
                       doctest::Contains("column 2"), InputError);
  CHECK_NOTHROW(standardize(Configuration(x), Standardization::kMean));
}

TEST_CASE("pca: perfectly correlated columns") {
  MatrixXd x(4, 2);
  x << 1, 2, 2, 4, 3, 6, 5, 10;
  const PcaResult p = pca(standardize(Configuration(x), Standardization::kCorrelation), 1);
  CHECK(p.explained_fraction[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(pca(standardize(Configuration(x), Standardization::kCorrelation), 2), InputError);
}

TEST_CASE("pca: orthogonal design gives coordinate axes by norm") {
  MatrixXd x(4, 3);
  x << 1, 3, 2, -1, 3, -2, 1, -3, -2, -1, -3, 2;
  const PcaResult p = pca(Configuration(x), 3);
  CHECK((p.loadings.cwiseAbs() - MatrixXd((MatrixXd(3, 3) << 0, 0, 1, 1, 0, 0, 0, 1, 0).finished()))
            .cwiseAbs()
            .maxCoeff() <= 1e-12);
  CHECK(p.singular_values[0] == doctest::Approx(6.0));
  CHECK(p.singular_values[1] == doctest::Approx(4.0));
  CHECK(p.singular_values[2] == doctest::Approx(2.0));
}

TEST_CASE("pca reproduces the input at full rank") {
  std::mt19937_64 rng(1);
  const Configuration c = standardize(Configuration(oracle::random_matrix(rng, 12, 4)),
                                      Standardization::kMean);
  const PcaResult p = pca(c, 4);
  CHECK((p.scores * p.loadings.transpose() - c.coords()).norm() <= 1e-9 * c.coords().norm());
  CHECK((p.loadings.transpose() * p.loadings - MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() <=
        1e-12);
  CHECK(p.explained_fraction.sum() == doctest::Approx(1.0));
}

TEST_CASE("longley correlation pca matches the correlation eigenproblem") {
  const Configuration z = standardize(longley().points, Standardization::kCorrelation);
  const PcaResult p = pca(z, 2);
  const MatrixXd corr = z.coords().transpose() * z.coords() / 15.0;
  CHECK((corr.diagonal().array() - 1.0).abs().maxCoeff() <= 1e-12);
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(corr);
  for (int k = 0; k < 2; ++k) {
    const double lambda = eig.eigenvalues()[5 - k];
    CHECK(p.explained_fraction[k] == doctest::Approx(lambda / 6.0).epsilon(1e-10));
    const VectorXd v = eig.eigenvectors().col(5 - k);
    CHECK(std::abs(std::abs(v.dot(p.loadings.col(k))) - 1.0) <= 1e-10);
  }
}

TEST_CASE("equal variance witness on canonical forms") {
  std::mt19937_64 rng(2);
  for (const Configuration& c : {hexagon_h(), grid6_h(), longley().points,
                                 Configuration(oracle::random_matrix(rng, 9, 5))}) {
    const CanonicalForm cf = canonical_form(c, mean_gamma(c.n()));
    const EqualVarianceReport rep = equal_variance_witness(cf, 100, 7);
    CHECK(rep.directions == 100);
    CHECK(rep.max_unit_deviation <= 1e-10);
    CHECK(rep.max_cross_term <= 1e-10);
  }
}

TEST_CASE("witness uses row weights in weighted mode") {
  MatrixXd x(5, 2);
  x << 0, 0, 0, 0, 1, 0, 0, 1, 1, 1;
  const Configuration d = dedup_weighted(Configuration(x));
  const VectorXd w = d.weight_vector();
  const CanonicalForm cf = canonical_form_weighted(d, CenteringVector(w / w.sum()));
  CHECK(equal_variance_witness(cf, 50, 1).max_unit_deviation <= 1e-10);
}

TEST_CASE("variable axes") {
  std::mt19937_64 rng(3);
  const MatrixXd x = oracle::random_matrix(rng, 10, 3);
  const CanonicalForm cf = canonical_form(Configuration(x), mean_gamma(10));

  const VariableAxes full = variable_axes(cf, MatrixXd::Identity(3, 3));
  const MatrixXd expected = cf.g_t.transpose() * cf.lambda_sqrt.cwiseInverse().asDiagonal();
  for (Eigen::Index i = 0; i < 3; ++i) {
    CHECK(full.defined[static_cast<std::size_t>(i)]);
    CHECK(full.norms[i] == doctest::Approx(expected.row(i).norm()));
    CHECK((full.directions.row(i) - expected.row(i).normalized()).norm() <= 1e-12);
  }

  const VariableAxes zero = variable_axes(cf, MatrixXd::Zero(3, 2));
  CHECK(std::none_of(zero.defined.begin(), zero.defined.end(), [](bool b) { return b; }));
  CHECK(zero.directions.isZero(0.0));
  CHECK_THROWS_AS(variable_axes(cf, MatrixXd::Zero(2, 2)), InputError);

  // The map takes centred input rows to reduced coordinates.
  const MatrixXd b = oracle::random_matrix(rng, 3, 2);
  const MatrixXd l = cf.g_t.transpose() * cf.lambda_sqrt.cwiseInverse().asDiagonal() * b;
  CHECK((center(x, mean_gamma(10)) * l - cf.h * b).norm() <= 1e-10);
}

TEST_CASE("swarm statistics") {
  MatrixXd one(1, 2);
  one << 3, 4;
  const SwarmStats s = swarm_stats(one);
  CHECK(s.radii[0] == 5.0);
  CHECK(s.angles[0] == std::atan2(4.0, 3.0));

  MatrixXd z(4, 2);
  z << 0, 0, 0, -1, -1, 0, 1, 1;
  const SwarmStats t = swarm_stats(z, {"o", "s", "w", "ne"});
  CHECK(t.min_radius == 0.0);
  CHECK(t.max_radius == doctest::Approx(std::sqrt(2.0)));
  CHECK(t.angles[2] == doctest::Approx(std::numbers::pi));
  CHECK(t.angles[1] == doctest::Approx(1.5 * std::numbers::pi));
  CHECK(t.angular_order == std::vector<std::string>{"o", "ne", "w", "s"});

  std::mt19937_64 rng(4);
  const MatrixXd r = oracle::random_matrix(rng, 20, 3);
  const SwarmStats u = swarm_stats(r);
  CHECK(u.angles.size() == 0);
  CHECK((u.radii - origin_sq_distances(r).d2_0.cwiseSqrt()).norm() <= 1e-14);
  CHECK(u.min_radius == u.radii.minCoeff());
  CHECK_THROWS_AS(swarm_stats(z, {"a"}), InputError);
}

}  // TEST_SUITE
