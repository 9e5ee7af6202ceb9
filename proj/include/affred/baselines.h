#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "affred/canonical.h"
#include "affred/geometry.h"

namespace affred {

enum class Standardization { kMean, kCorrelation };

/// Mean-centres every column; correlation mode also divides by the sample
/// standard deviation (n - 1 divisor). Throws InputError naming a constant
/// column in correlation mode.
Configuration standardize(const Configuration& c, Standardization mode);

struct PcaResult {
  Eigen::MatrixXd scores;    // N x q
  Eigen::MatrixXd loadings;  // p x q, orthonormal columns
  Eigen::VectorXd singular_values;
  Eigen::VectorXd explained_fraction;
};

/// Top-q SVD of an already standardized matrix. Loadings follow the same sign
/// rule as the canonical form.
PcaResult pca(const Configuration& c, Eigen::Index q);

struct EqualVarianceReport {
  int directions = 0;
  /// max |u'H'Hu - 1| over the sampled unit directions.
  double max_unit_deviation = 0.0;
  /// max |u'H'Hv| over sampled pairs made orthogonal to each other.
  double max_cross_term = 0.0;
};

/// Samples random unit directions u in r-space and measures how far u'H'Hu
/// strays from 1. On any canonical form every direction carries the same sum
/// of squares, so principal components cannot rank the axes of H.
EqualVarianceReport equal_variance_witness(const CanonicalForm& cf, int directions,
                                           std::uint64_t seed);

struct VariableAxes {
  /// p x q, each defined row scaled to unit length.
  Eigen::MatrixXd directions;
  /// Row norms before normalization.
  Eigen::VectorXd norms;
  /// False where the pre-normalization norm is below 1e-12.
  std::vector<bool> defined;
};

/// Rows of L = G diag(lambda_sqrt)^-1 B, the linear map taking a centred
/// input row to its reduced coordinates: one direction per original variable.
VariableAxes variable_axes(const CanonicalForm& cf, const Eigen::Ref<const Eigen::MatrixXd>& b);

struct SwarmStats {
  Eigen::VectorXd radii;
  double min_radius = 0.0;
  double max_radius = 0.0;
  /// Only for q == 2; radians in [0, 2 pi).
  Eigen::VectorXd angles;
  /// Labels sorted by angle (q == 2 only).
  std::vector<std::string> angular_order;
};

SwarmStats swarm_stats(const Eigen::Ref<const Eigen::MatrixXd>& z,
                       const std::vector<std::string>& labels = {});

}  // namespace affred
