#include "affred/objective.h"

#include <string>

#include "affred/errors.h"

namespace affred {

namespace {

void check_weights(const Eigen::VectorXd& w, Eigen::Index n) {
  if (w.size() == 0) return;
  if (w.size() != n) {
    throw InputError("weight vector has " + std::to_string(w.size()) + " entries for " +
                     std::to_string(n) + " points");
  }
  if (!w.allFinite() || (w.array() <= 0.0).any()) {
    throw InputError("weights must be finite and positive");
  }
}

void check_conformable(const Eigen::Ref<const Eigen::MatrixXd>& h,
                       const Eigen::Ref<const Eigen::MatrixXd>& b) {
  if (b.rows() != h.cols()) {
    throw InputError("B has " + std::to_string(b.rows()) + " rows but H has " +
                     std::to_string(h.cols()) + " columns");
  }
  require_finite(h, "H");
  require_finite(b, "B");
}

}  // namespace

double norm2_direct(const SquaredDistances& dx, const SquaredDistances& dz,
                    const Eigen::VectorXd& weights) {
  const Eigen::Index n = dx.d2.rows();
  if (dx.d2.cols() != n || dz.d2.rows() != n || dz.d2.cols() != n) {
    throw InputError("squared-distance matrices differ in size");
  }
  check_weights(weights, n);
  double total = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i == j) continue;
      const double d = dx.d2(i, j) - dz.d2(i, j);
      const double w = weights.size() == 0 ? 1.0 : weights[i] * weights[j];
      total += w * d * d;
    }
  }
  return total;
}

Eigen::VectorXd rho(const Eigen::Ref<const Eigen::MatrixXd>& h,
                    const Eigen::Ref<const Eigen::MatrixXd>& b) {
  check_conformable(h, b);
  const Eigen::MatrixXd z = h * b;
  return h.rowwise().squaredNorm() - z.rowwise().squaredNorm();
}

ObjectiveValue norm2_closed(const Eigen::Ref<const Eigen::MatrixXd>& h,
                            const Eigen::Ref<const Eigen::MatrixXd>& b) {
  check_conformable(h, b);
  const Eigen::MatrixXd z = h * b;
  const Eigen::MatrixXd e = h * h.transpose() - z * z.transpose();
  const auto n = static_cast<double>(h.rows());

  ObjectiveValue out;
  out.rho = e.diagonal();
  const double rho_sum = out.rho.sum();
  out.gram_term = 4.0 * e.squaredNorm();
  out.rho_sum_term = 2.0 * rho_sum * rho_sum;
  out.rho_quad_term = 2.0 * n * out.rho.squaredNorm();
  out.cross_term = -8.0 * out.rho.dot(e.rowwise().sum());
  out.value = out.gram_term + out.rho_sum_term + out.rho_quad_term + out.cross_term;
  return out;
}

Eigen::MatrixXd gradient_norm2(const Eigen::Ref<const Eigen::MatrixXd>& h,
                               const Eigen::Ref<const Eigen::MatrixXd>& b,
                               const Eigen::VectorXd& weights) {
  check_conformable(h, b);
  Norm2Evaluator eval(h, weights);
  Eigen::MatrixXd grad;
  eval.value_and_gradient(b, grad);
  return grad;
}

Norm2Evaluator::Norm2Evaluator(Eigen::MatrixXd h, Eigen::VectorXd weights)
    : h_(std::move(h)), weights_(std::move(weights)) {
  require_finite(h_, "H");
  check_weights(weights_, h_.rows());
  dx_ = squared_distances(h_).d2;
  h_ext_ = h_.cast<long double>();
}

void Norm2Evaluator::check_shape(const Eigen::Ref<const Eigen::MatrixXd>& b) const {
  if (b.rows() != h_.cols()) {
    throw InputError("B has " + std::to_string(b.rows()) + " rows but H has " +
                     std::to_string(h_.cols()) + " columns");
  }
}

double Norm2Evaluator::value(const Eigen::Ref<const Eigen::MatrixXd>& b) const {
  check_shape(b);
  const MatrixXld z = h_ext_ * b.cast<long double>();
  const Eigen::Index n = h_.rows();
  const bool weighted = weights_.size() > 0;
  long double total = 0.0L;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const long double r = dx_(i, j) - (z.row(i) - z.row(j)).squaredNorm();
      total += (weighted ? weights_[i] * weights_[j] : 1.0L) * r * r;
    }
  }
  return static_cast<double>(2.0L * total);
}

double Norm2Evaluator::value_and_gradient(const Eigen::Ref<const Eigen::MatrixXd>& b,
                                          Eigen::MatrixXd& grad) const {
  check_shape(b);
  const MatrixXld z = h_ext_ * b.cast<long double>();
  const Eigen::Index n = h_.rows();
  const bool weighted = weights_.size() > 0;

  // grad = -8 H' L(M) Z, where M_ij = w_i w_j (dx_ij - dz_ij) and L(M) is its
  // graph Laplacian diag(M1) - M.
  MatrixXld lz = MatrixXld::Zero(n, b.cols());
  long double total = 0.0L;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const auto dz = z.row(i) - z.row(j);
      const long double r = dx_(i, j) - dz.squaredNorm();
      const long double m = (weighted ? weights_[i] * weights_[j] : 1.0L) * r;
      total += m * r;
      lz.row(i) += m * dz;
      lz.row(j) -= m * dz;
    }
  }
  grad = -8.0 * (h_.transpose() * lz.cast<double>());
  return static_cast<double>(2.0L * total);
}

}  // namespace affred
