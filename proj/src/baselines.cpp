#include "affred/baselines.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

#include "affred/errors.h"

namespace affred {

Configuration standardize(const Configuration& c, Standardization mode) {
  Eigen::MatrixXd x = c.coords().rowwise() - c.coords().colwise().mean();
  if (mode == Standardization::kCorrelation) {
    if (c.n() < 2) throw InputError("correlation form needs at least two points");
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      const double sd = std::sqrt(x.col(j).squaredNorm() / static_cast<double>(c.n() - 1));
      if (!(sd > 0.0)) {
        throw InputError("column " + std::to_string(j + 1) +
                         " has zero variance and cannot be put in correlation form");
      }
      x.col(j) /= sd;
    }
  }
  return Configuration(std::move(x), c.labels(), c.weights());
}

PcaResult pca(const Configuration& c, Eigen::Index q) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(c.coords(), Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv[rank] > kDefaultRankTolerance * sv[0]) ++rank;
  if (q < 1 || q > rank) {
    throw InputError("PCA dimension q=" + std::to_string(q) + " must lie in [1, rank=" +
                     std::to_string(rank) + "]");
  }
  Eigen::MatrixXd loadings = svd.matrixV().leftCols(q);
  Eigen::MatrixXd u_t = svd.matrixU().leftCols(q).transpose();
  apply_sign_convention(loadings, &u_t);

  PcaResult out;
  out.singular_values = sv.head(q);
  out.loadings = std::move(loadings);
  out.scores = u_t.transpose() * out.singular_values.asDiagonal();
  out.explained_fraction = sv.head(q).array().square() / sv.squaredNorm();
  return out;
}

EqualVarianceReport equal_variance_witness(const CanonicalForm& cf, int directions,
                                           std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const Eigen::Index r = cf.h.cols();
  const Eigen::MatrixXd gram = cf.weighted()
                                   ? Eigen::MatrixXd(cf.h.transpose() * cf.row_weights.asDiagonal() * cf.h)
                                   : Eigen::MatrixXd(cf.h.transpose() * cf.h);
  auto draw = [&] {
    Eigen::VectorXd u(r);
    for (Eigen::Index i = 0; i < r; ++i) u[i] = normal(rng);
    return Eigen::VectorXd(u.normalized());
  };

  EqualVarianceReport out;
  out.directions = directions;
  for (int k = 0; k < directions; ++k) {
    const Eigen::VectorXd u = draw();
    out.max_unit_deviation = std::max(out.max_unit_deviation, std::abs(u.dot(gram * u) - 1.0));
    if (r >= 2) {
      Eigen::VectorXd v = draw();
      v = (v - v.dot(u) * u).normalized();
      out.max_cross_term = std::max(out.max_cross_term, std::abs(u.dot(gram * v)));
    }
  }
  return out;
}

VariableAxes variable_axes(const CanonicalForm& cf, const Eigen::Ref<const Eigen::MatrixXd>& b) {
  if (b.rows() != cf.rank) {
    throw InputError("B has " + std::to_string(b.rows()) + " rows for rank " +
                     std::to_string(cf.rank));
  }
  const Eigen::MatrixXd l =
      cf.g_t.transpose() * cf.lambda_sqrt.cwiseInverse().asDiagonal() * b;
  VariableAxes out;
  out.directions = l;
  out.norms = l.rowwise().norm();
  out.defined.assign(static_cast<std::size_t>(l.rows()), false);
  for (Eigen::Index i = 0; i < l.rows(); ++i) {
    if (out.norms[i] < 1e-12) {
      out.directions.row(i).setZero();
      continue;
    }
    out.directions.row(i) /= out.norms[i];
    out.defined[static_cast<std::size_t>(i)] = true;
  }
  return out;
}

SwarmStats swarm_stats(const Eigen::Ref<const Eigen::MatrixXd>& z,
                       const std::vector<std::string>& labels) {
  if (z.rows() < 1 || z.cols() < 1) throw InputError("swarm statistics need at least one point");
  if (!labels.empty() && static_cast<Eigen::Index>(labels.size()) != z.rows()) {
    throw InputError("label count does not match point count");
  }
  SwarmStats out;
  out.radii = z.rowwise().norm();
  out.min_radius = out.radii.minCoeff();
  out.max_radius = out.radii.maxCoeff();
  if (z.cols() == 2) {
    const Eigen::Index n = z.rows();
    out.angles.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      double a = std::atan2(z(i, 1), z(i, 0));
      if (a < 0.0) a += 2.0 * std::numbers::pi;
      if (a >= 2.0 * std::numbers::pi) a = 0.0;
      out.angles[i] = a;
    }
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return out.angles[a] < out.angles[b]; });
    for (Eigen::Index i : order) {
      out.angular_order.push_back(labels.empty() ? std::to_string(i + 1) : labels[i]);
    }
  }
  return out;
}

}  // namespace affred
