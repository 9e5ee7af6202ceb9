#pragma once

#include <Eigen/Dense>

#include "affred/geometry.h"

namespace affred {

/// Norm2 at Z = HB split into its four additive pieces, with E = HH' - ZZ'
/// and rho = diag(E):
///   value = 4||E||^2 + 2(rho'1)^2 + 2N rho'rho - 8 rho'E1.
/// The last (cross) term vanishes whenever 1'H = 0.
struct ObjectiveValue {
  double value = 0.0;
  Eigen::VectorXd rho;
  double gram_term = 0.0;
  double rho_sum_term = 0.0;
  double rho_quad_term = 0.0;
  double cross_term = 0.0;
};

/// Sum over all (i, j) of w_i w_j (dx_ij - dz_ij)^2. An empty weight vector
/// means unit weights.
double norm2_direct(const SquaredDistances& dx, const SquaredDistances& dz,
                    const Eigen::VectorXd& weights = {});

/// d2_0(H) - d2_0(HB).
Eigen::VectorXd rho(const Eigen::Ref<const Eigen::MatrixXd>& h,
                    const Eigen::Ref<const Eigen::MatrixXd>& b);

ObjectiveValue norm2_closed(const Eigen::Ref<const Eigen::MatrixXd>& h,
                            const Eigen::Ref<const Eigen::MatrixXd>& b);

/// d/dB of norm2_direct(D2(H), D2(HB), w).
Eigen::MatrixXd gradient_norm2(const Eigen::Ref<const Eigen::MatrixXd>& h,
                               const Eigen::Ref<const Eigen::MatrixXd>& b,
                               const Eigen::VectorXd& weights = {});

/// Reusable evaluator for one H: caches D2(H) and the pair weights so repeated
/// value/gradient calls during a search only touch Z. Immutable once built, so
/// one instance may serve many threads.
///
/// Z and the residuals are formed in long double. Near an optimum the
/// residuals cancel heavily, and in plain double the value jitters by several
/// ulps, which is more than the decrease a final step can make.
class Norm2Evaluator {
 public:
  explicit Norm2Evaluator(Eigen::MatrixXd h, Eigen::VectorXd weights = {});

  Eigen::Index n() const { return h_.rows(); }
  Eigen::Index rank() const { return h_.cols(); }
  const Eigen::MatrixXd& h() const { return h_; }
  const Eigen::VectorXd& weights() const { return weights_; }

  double value(const Eigen::Ref<const Eigen::MatrixXd>& b) const;
  /// Returns the value and writes the gradient into `grad` (resized as needed).
  double value_and_gradient(const Eigen::Ref<const Eigen::MatrixXd>& b,
                            Eigen::MatrixXd& grad) const;

 private:
  void check_shape(const Eigen::Ref<const Eigen::MatrixXd>& b) const;

  using MatrixXld = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

  Eigen::MatrixXd h_;
  Eigen::VectorXd weights_;
  Eigen::MatrixXd dx_;
  MatrixXld h_ext_;
};

}  // namespace affred
