#pragma once

// Independent reference computations used only by tests. Nothing here calls
// the optimizer or the analytic gradient.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace affred::oracle {

/// Full double sum of squared differences between pairwise squared distances,
/// straight from the coordinates.
inline double norm2_brute(const Eigen::MatrixXd& x, const Eigen::MatrixXd& z,
                          const Eigen::VectorXd& w = {}) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.rows(); ++j) {
      const double dx = (x.row(i) - x.row(j)).squaredNorm();
      const double dz = (z.row(i) - z.row(j)).squaredNorm();
      const double wij = w.size() == 0 ? 1.0 : w[i] * w[j];
      total += wij * (dx - dz) * (dx - dz);
    }
  }
  return total;
}

/// Along a fixed direction u (q = 1) the objective is A - 2C s^2 + E s^4 in
/// the scale s; returns its minimum over s together with the minimizing s.
struct RayMinimum {
  double value;
  double scale;
};

inline RayMinimum ray_minimum(const Eigen::MatrixXd& h, const Eigen::VectorXd& u) {
  const Eigen::VectorXd proj = h * u;
  double a = 0.0, c = 0.0, e = 0.0;
  for (Eigen::Index i = 0; i < h.rows(); ++i) {
    for (Eigen::Index j = 0; j < h.rows(); ++j) {
      const double dx = (h.row(i) - h.row(j)).squaredNorm();
      const double du = (proj[i] - proj[j]) * (proj[i] - proj[j]);
      a += dx * dx;
      c += dx * du;
      e += du * du;
    }
  }
  if (e == 0.0) return {a, 0.0};
  return {a - c * c / e, std::sqrt(c / e)};
}

/// Plain objective at Z = s * H u evaluated by brute force (grid oracle).
inline double ray_value(const Eigen::MatrixXd& h, const Eigen::VectorXd& u, double s) {
  return norm2_brute(h, s * (h * u));
}

inline Eigen::Vector2d direction(double phi) { return {std::sin(phi), std::cos(phi)}; }

/// Exhaustive angle x scale grid for r = 2, q = 1 followed by a golden-section
/// polish in angle with the closed-form best scale.
struct GridResult {
  double value;
  double phi;
  double scale;
  int minima;  // distinct local minima of the profiled curve on [0, pi)
};

inline double golden_min(const std::function<double(double)>& f, double lo, double hi,
                         double& arg) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int k = 0; k < 200 && b - a > 1e-13; ++k) {
    if (fc < fd) {
      b = d; d = c; fd = fc; c = b - g * (b - a); fc = f(c);
    } else {
      a = c; c = d; fc = fd; d = a + g * (b - a); fd = f(d);
    }
  }
  arg = 0.5 * (a + b);
  return f(arg);
}

inline GridResult angle_scale_grid(const Eigen::MatrixXd& h, double deg_step = 0.5,
                                   double scale_step = 0.005, double max_scale = 2.0) {
  const int n_phi = static_cast<int>(std::lround(180.0 / deg_step));
  std::vector<double> profile(static_cast<std::size_t>(n_phi));
  GridResult best{std::numeric_limits<double>::infinity(), 0.0, 0.0, 0};
  for (int k = 0; k < n_phi; ++k) {
    const double phi = k * deg_step * std::numbers::pi / 180.0;
    double row_best = std::numeric_limits<double>::infinity();
    for (double s = scale_step; s <= max_scale; s += scale_step) {
      const double v = ray_value(h, direction(phi), s);
      if (v < row_best) row_best = v;
      if (v < best.value) best = {v, phi, s, 0};
    }
    profile[static_cast<std::size_t>(k)] = row_best;
  }
  // Polish: profile in angle with exact scale.
  const double step = deg_step * std::numbers::pi / 180.0;
  double phi = best.phi;
  auto profiled = [&](double a) { return ray_minimum(h, direction(a)).value; };
  best.value = golden_min(profiled, phi - step, phi + step, phi);
  best.phi = phi;
  best.scale = ray_minimum(h, direction(phi)).scale;

  // Count strict local minima of the exact profile on the circular grid.
  std::vector<double> exact(profile.size());
  for (int k = 0; k < n_phi; ++k) exact[static_cast<std::size_t>(k)] = profiled(k * step);
  int minima = 0;
  for (int k = 0; k < n_phi; ++k) {
    const double prev = exact[static_cast<std::size_t>((k + n_phi - 1) % n_phi)];
    const double next = exact[static_cast<std::size_t>((k + 1) % n_phi)];
    const double cur = exact[static_cast<std::size_t>(k)];
    if (cur < prev - 1e-12 && cur <= next) ++minima;
  }
  best.minima = minima;
  return best;
}

/// Central finite-difference gradient of f at b.
inline Eigen::MatrixXd fd_gradient(const std::function<double(const Eigen::MatrixXd&)>& f,
                                   const Eigen::MatrixXd& b) {
  Eigen::MatrixXd g(b.rows(), b.cols());
  for (Eigen::Index i = 0; i < b.rows(); ++i) {
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      const double step = 1e-6 * (1.0 + std::abs(b(i, j)));
      Eigen::MatrixXd bp = b, bm = b;
      bp(i, j) += step;
      bm(i, j) -= step;
      g(i, j) = (f(bp) - f(bm)) / (2.0 * step);
    }
  }
  return g;
}

inline Eigen::MatrixXd random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  return m;
}

/// Random nonsingular p x p matrix with condition number well below 1e3.
inline Eigen::MatrixXd random_nonsingular(std::mt19937_64& rng, Eigen::Index p) {
  while (true) {
    Eigen::MatrixXd b = random_matrix(rng, p, p);
    const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(b).singularValues();
    if (sv[p - 1] > 1e-2 * sv[0]) return b;
  }
}

/// Random orthonormal columns spanning the complement of `gamma` (r of them):
/// a valid canonical H for that centring vector.
inline Eigen::MatrixXd random_h(std::mt19937_64& rng, const Eigen::VectorXd& gamma, Eigen::Index r) {
  const Eigen::Index n = gamma.size();
  Eigen::MatrixXd m = random_matrix(rng, n, r);
  // Project out 1 along gamma: (I - 1 gamma') m is orthogonal to gamma.
  m -= Eigen::VectorXd::Ones(n) * (gamma.transpose() * m);
  // Orthonormalize in the metric where gamma stays orthogonal: columns already
  // satisfy gamma'm = 0; Gram-Schmidt keeps that.
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, r);
  return q;
}

}  // namespace affred::oracle

namespace affred::oracle {

/// Strict 2-D convex hull (Andrew's monotone chain, collinear points
/// dropped). Returns a flag per point; every copy of a vertex is flagged.
inline std::vector<bool> hull_2d(const Eigen::MatrixXd& x) {
  const Eigen::Index n = x.rows();
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
  std::sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
    return x(a, 0) < x(b, 0) || (x(a, 0) == x(b, 0) && x(a, 1) < x(b, 1));
  });
  auto cross = [&](Eigen::Index o, Eigen::Index a, Eigen::Index b) {
    return (x(a, 0) - x(o, 0)) * (x(b, 1) - x(o, 1)) - (x(a, 1) - x(o, 1)) * (x(b, 0) - x(o, 0));
  };
  std::vector<Eigen::Index> hull;
  for (int pass = 0; pass < 2; ++pass) {
    const std::size_t base = hull.size();
    for (Eigen::Index i : idx) {
      while (hull.size() >= base + 2 && cross(hull[hull.size() - 2], hull.back(), i) <= 0)
        hull.pop_back();
      hull.push_back(i);
    }
    hull.pop_back();
    std::reverse(idx.begin(), idx.end());
  }
  std::vector<bool> flags(static_cast<std::size_t>(n), false);
  for (Eigen::Index h : hull)
    for (Eigen::Index i = 0; i < n; ++i)
      if (x.row(i) == x.row(h)) flags[static_cast<std::size_t>(i)] = true;
  return flags;
}

}  // namespace affred::oracle
