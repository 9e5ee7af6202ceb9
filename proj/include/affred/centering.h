#pragma once

#include <vector>

#include <Eigen/Dense>

#include "affred/geometry.h"

namespace affred {

/// A generalized inverse of the all-ones vector: N weights summing to one.
/// Choosing one fixes where the origin lands after centering.
class CenteringVector {
 public:
  /// Throws InputError unless the entries are finite and sum to 1 within 1e-12.
  explicit CenteringVector(Eigen::VectorXd gamma);

  const Eigen::VectorXd& values() const { return gamma_; }
  Eigen::Index size() const { return gamma_.size(); }
  double operator[](Eigen::Index i) const { return gamma_[i]; }

  /// The N x N centering matrix I - 1 gamma'.
  Eigen::MatrixXd centering_matrix() const;

 private:
  Eigen::VectorXd gamma_;
};

/// Equal weights 1/n: the ordinary centroid.
CenteringVector mean_gamma(Eigen::Index n);
/// Indicator of point i: that point becomes the origin.
CenteringVector point_gamma(Eigen::Index n, Eigen::Index i);

/// X - 1 (gamma' X). Labels and weights carry over.
Configuration center(const Configuration& c, const CenteringVector& g);
Eigen::MatrixXd center(const Eigen::Ref<const Eigen::MatrixXd>& x, const CenteringVector& g);

/// Flag i is set when point i is not a convex combination of the other
/// distinct points. Every copy of an extreme location is flagged.
///
/// The test runs in whitened coordinates, so the outcome does not depend on
/// the scaling or correlation of the input columns.
std::vector<bool> hull_vertex_flags(const Configuration& c);
std::vector<bool> hull_vertex_flags(const Eigen::Ref<const Eigen::MatrixXd>& x);

struct MedianResult {
  CenteringVector gamma;
  /// Point indices removed at each peeling stage.
  std::vector<std::vector<Eigen::Index>> peel_stages;
  /// Indices sharing the weight, ascending.
  std::vector<Eigen::Index> final_hull;
};

/// Convex-hull peeling median. Peels exterior hulls until the remaining set is
/// all extreme and pairwise distinct; at a coincident hull location only one
/// copy is set aside per stage.
MedianResult affine_median_gamma(const Configuration& c);

}  // namespace affred
