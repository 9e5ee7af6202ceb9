#include "nnls.h"

#include <limits>
#include <vector>

namespace affred::detail {

namespace {

Eigen::VectorXd solve_passive(const Eigen::Ref<const Eigen::MatrixXd>& a,
                              const Eigen::Ref<const Eigen::VectorXd>& b,
                              const std::vector<bool>& passive) {
  std::vector<Eigen::Index> cols;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    if (passive[j]) cols.push_back(j);
  }
  Eigen::VectorXd s = Eigen::VectorXd::Zero(a.cols());
  if (cols.empty()) return s;
  Eigen::MatrixXd ap(a.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) ap.col(static_cast<Eigen::Index>(k)) = a.col(cols[k]);
  const Eigen::VectorXd sp = ap.completeOrthogonalDecomposition().solve(b);
  for (std::size_t k = 0; k < cols.size(); ++k) s[cols[k]] = sp[static_cast<Eigen::Index>(k)];
  return s;
}

}  // namespace

NnlsResult nnls(const Eigen::Ref<const Eigen::MatrixXd>& a,
                const Eigen::Ref<const Eigen::VectorXd>& b, int max_iterations) {
  const Eigen::Index n = a.cols();
  if (max_iterations <= 0) max_iterations = static_cast<int>(3 * n + 10);

  NnlsResult out;
  out.x = Eigen::VectorXd::Zero(n);
  std::vector<bool> passive(n, false);

  const double eps = std::numeric_limits<double>::epsilon();
  const double tol = 10.0 * eps * a.cwiseAbs().maxCoeff() * static_cast<double>(std::max(a.rows(), n));

  Eigen::VectorXd w = a.transpose() * (b - a * out.x);
  int iterations = 0;
  out.converged = true;
  while (true) {
    Eigen::Index t = -1;
    double best = tol;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!passive[j] && w[j] > best) {
        best = w[j];
        t = j;
      }
    }
    if (t < 0) break;
    if (++iterations > max_iterations) {
      out.converged = false;
      break;
    }
    passive[t] = true;

    while (true) {
      Eigen::VectorXd s = solve_passive(a, b, passive);
      bool feasible = true;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[j] && s[j] <= 0.0) feasible = false;
      }
      if (feasible) {
        out.x = s;
        break;
      }
      double alpha = std::numeric_limits<double>::infinity();
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[j] && s[j] <= 0.0) {
          alpha = std::min(alpha, out.x[j] / (out.x[j] - s[j]));
        }
      }
      out.x += alpha * (s - out.x);
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[j] && out.x[j] <= tol) {
          passive[j] = false;
          out.x[j] = 0.0;
        }
      }
    }
    w = a.transpose() * (b - a * out.x);
  }
  out.residual_norm = (a * out.x - b).norm();
  return out;
}

}  // namespace affred::detail
