#include "affred/centering.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "affred/errors.h"
#include "nnls.h"

namespace affred {

CenteringVector::CenteringVector(Eigen::VectorXd gamma) : gamma_(std::move(gamma)) {
  if (gamma_.size() < 1) throw InputError("centering vector is empty");
  if (!gamma_.allFinite()) throw InputError("centering vector contains non-finite entries");
  const double sum = gamma_.sum();
  if (std::abs(sum - 1.0) > 1e-12) {
    throw InputError("centering vector entries sum to " + std::to_string(sum) + ", not 1");
  }
}

Eigen::MatrixXd CenteringVector::centering_matrix() const {
  const Eigen::Index n = gamma_.size();
  return Eigen::MatrixXd::Identity(n, n) - Eigen::VectorXd::Ones(n) * gamma_.transpose();
}

CenteringVector mean_gamma(Eigen::Index n) {
  if (n < 1) throw InputError("mean centering needs at least one point");
  return CenteringVector(Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n)));
}

CenteringVector point_gamma(Eigen::Index n, Eigen::Index i) {
  if (n < 1 || i < 0 || i >= n) {
    throw InputError("point index " + std::to_string(i) + " out of range for " +
                     std::to_string(n) + " points");
  }
  Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
  g[i] = 1.0;
  return CenteringVector(std::move(g));
}

Eigen::MatrixXd center(const Eigen::Ref<const Eigen::MatrixXd>& x, const CenteringVector& g) {
  if (g.size() != x.rows()) {
    throw InputError("centering vector has " + std::to_string(g.size()) + " entries for " +
                     std::to_string(x.rows()) + " points");
  }
  const Eigen::RowVectorXd origin = g.values().transpose() * x;
  return x.rowwise() - origin;
}

Configuration center(const Configuration& c, const CenteringVector& g) {
  return Configuration(center(c.coords(), g), c.labels(), c.weights());
}

namespace {

constexpr double kFeasibilityTolerance = 1e-9;

struct HullAnalysis {
  std::vector<bool> extreme;
  /// group[i] is the smallest index coincident with point i.
  std::vector<Eigen::Index> group;
};

// Mean-centred principal coordinates scaled to unit mean-square per axis.
// Collinear or coplanar scatters drop to their own affine dimension here.
Eigen::MatrixXd whiten(const Eigen::Ref<const Eigen::MatrixXd>& x) {
  const Eigen::Index n = x.rows();
  const Eigen::MatrixXd xc = x.rowwise() - x.colwise().mean();
  if (xc.cwiseAbs().maxCoeff() == 0.0) return Eigen::MatrixXd::Zero(n, 0);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(xc, Eigen::ComputeThinU);
  const Eigen::VectorXd& sv = svd.singularValues();
  Eigen::Index r = 0;
  while (r < sv.size() && sv[r] > 1e-10 * sv[0]) ++r;
  return svd.matrixU().leftCols(r) * std::sqrt(static_cast<double>(n));
}

HullAnalysis analyze_hull(const Eigen::Ref<const Eigen::MatrixXd>& x) {
  require_finite(x, "coordinates");
  const Eigen::Index n = x.rows();
  HullAnalysis out{std::vector<bool>(n, true), std::vector<Eigen::Index>(n)};
  std::iota(out.group.begin(), out.group.end(), Eigen::Index{0});

  const Eigen::MatrixXd y = whiten(x);
  const Eigen::Index r = y.cols();
  if (r == 0) {
    std::fill(out.group.begin(), out.group.end(), Eigen::Index{0});
    return out;
  }

  const double coincident = coincidence_threshold(y);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      if ((y.row(i) - y.row(j)).squaredNorm() < coincident) {
        out.group[i] = out.group[j];
        break;
      }
    }
  }

  for (Eigen::Index i = 0; i < n; ++i) {
    std::vector<Eigen::Index> others;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (out.group[j] != out.group[i]) others.push_back(j);
    }
    if (others.empty()) continue;
    // Columns are [y_j; 1]; x_i is interior iff [y_i; 1] is a nonnegative
    // combination of them with zero residual.
    const auto m = static_cast<Eigen::Index>(others.size());
    Eigen::MatrixXd a(r + 1, m);
    for (Eigen::Index k = 0; k < m; ++k) {
      a.col(k).head(r) = y.row(others[k]).transpose();
      a(r, k) = 1.0;
    }
    Eigen::VectorXd b(r + 1);
    b.head(r) = y.row(i).transpose();
    b[r] = 1.0;
    const detail::NnlsResult sol = detail::nnls(a, b);
    if (!sol.converged) {
      throw InternalError("convex-combination test did not converge for point " +
                          std::to_string(i));
    }
    out.extreme[i] = sol.residual_norm > kFeasibilityTolerance;
  }
  return out;
}

}  // namespace

std::vector<bool> hull_vertex_flags(const Eigen::Ref<const Eigen::MatrixXd>& x) {
  if (x.rows() < 1) throw InputError("hull test needs at least one point");
  return analyze_hull(x).extreme;
}

std::vector<bool> hull_vertex_flags(const Configuration& c) {
  return hull_vertex_flags(c.coords());
}

MedianResult affine_median_gamma(const Configuration& c) {
  const Eigen::Index n = c.n();
  std::vector<Eigen::Index> remaining(n);
  std::iota(remaining.begin(), remaining.end(), Eigen::Index{0});
  std::vector<std::vector<Eigen::Index>> stages;

  while (true) {
    Eigen::MatrixXd x(static_cast<Eigen::Index>(remaining.size()), c.p());
    for (std::size_t k = 0; k < remaining.size(); ++k) {
      x.row(static_cast<Eigen::Index>(k)) = c.coords().row(remaining[k]);
    }
    const HullAnalysis hull = analyze_hull(x);
    const auto m = static_cast<Eigen::Index>(remaining.size());

    bool all_extreme = true;
    bool any_coincident = false;
    for (Eigen::Index k = 0; k < m; ++k) {
      all_extreme = all_extreme && hull.extreme[k];
      any_coincident = any_coincident || hull.group[k] != k;
    }
    if (all_extreme && !any_coincident) break;

    // Drop every extreme point, except that a coincident extreme location
    // loses only its highest-indexed copy.
    std::vector<bool> drop(m, false);
    for (Eigen::Index k = 0; k < m; ++k) {
      if (!hull.extreme[k]) continue;
      Eigen::Index last = k;
      Eigen::Index copies = 0;
      for (Eigen::Index j = 0; j < m; ++j) {
        if (hull.group[j] == hull.group[k]) {
          last = j;
          ++copies;
        }
      }
      drop[k] = copies == 1 || last == k;
    }
    std::vector<Eigen::Index> removed;
    std::vector<Eigen::Index> kept;
    for (Eigen::Index k = 0; k < m; ++k) {
      (drop[k] ? removed : kept).push_back(remaining[k]);
    }
    stages.push_back(std::move(removed));
    remaining = std::move(kept);
  }

  Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
  const double w = 1.0 / static_cast<double>(remaining.size());
  for (Eigen::Index i : remaining) g[i] = w;
  return MedianResult{CenteringVector(std::move(g)), std::move(stages), std::move(remaining)};
}

}  // namespace affred
