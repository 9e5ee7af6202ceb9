#pragma once

#include <Eigen/Dense>

namespace affred::detail {

struct NnlsResult {
  Eigen::VectorXd x;
  double residual_norm = 0.0;
  bool converged = false;
};

/// Lawson-Hanson active-set solver for min ||Ax - b|| subject to x >= 0.
NnlsResult nnls(const Eigen::Ref<const Eigen::MatrixXd>& a,
                const Eigen::Ref<const Eigen::VectorXd>& b, int max_iterations = 0);

}  // namespace affred::detail
