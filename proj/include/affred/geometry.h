#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace affred {

/// N points in p dimensions, one per row, with optional labels and
/// multiplicity weights.
class Configuration {
 public:
  Configuration() = default;

  /// Validates and takes ownership. `labels` and `weights` may be empty;
  /// otherwise they must have one entry per row. Throws InputError.
  explicit Configuration(Eigen::MatrixXd coords, std::vector<std::string> labels = {},
                         std::vector<double> weights = {});

  const Eigen::MatrixXd& coords() const { return coords_; }
  Eigen::Index n() const { return coords_.rows(); }
  Eigen::Index p() const { return coords_.cols(); }

  bool has_labels() const { return !labels_.empty(); }
  bool has_weights() const { return !weights_.empty(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<double>& weights() const { return weights_; }

  /// Label of point i, or its 1-based index when unlabeled.
  std::string label(Eigen::Index i) const;
  double weight(Eigen::Index i) const { return weights_.empty() ? 1.0 : weights_[i]; }
  /// All weights as a vector (ones when unweighted).
  Eigen::VectorXd weight_vector() const;

  /// Copy of this configuration restricted to the given rows, in order.
  Configuration subset(const std::vector<Eigen::Index>& rows) const;

 private:
  Eigen::MatrixXd coords_;
  std::vector<std::string> labels_;
  std::vector<double> weights_;
};

/// Symmetric N x N matrix of squared inter-point distances, zero diagonal.
struct SquaredDistances {
  Eigen::MatrixXd d2;
};

/// Squared distances of each point from the current origin.
struct OriginDistances {
  Eigen::VectorXd d2_0;
};

/// Two points whose squared separation is below this are treated as the same
/// location. Scale-relative: 1e-18 * (max squared origin distance + 1).
double coincidence_threshold(const Eigen::Ref<const Eigen::MatrixXd>& x);

/// Throws InputError if any entry of `x` is NaN or infinite.
void require_finite(const Eigen::Ref<const Eigen::MatrixXd>& x, const char* what);

/// Pairwise squared distances from coordinate differences (no Gram expansion).
SquaredDistances squared_distances(const Eigen::Ref<const Eigen::MatrixXd>& x);
SquaredDistances squared_distances(const Configuration& c);

OriginDistances origin_sq_distances(const Eigen::Ref<const Eigen::MatrixXd>& x);
OriginDistances origin_sq_distances(const Configuration& c);

/// XX', the association matrix for points.
Eigen::MatrixXd association_matrix(const Configuration& c);

/// D2 = d0 1' + 1 d0' - 2A with d0 = diag(A). `a` must be symmetric.
SquaredDistances reconstruct_d2(const Eigen::Ref<const Eigen::MatrixXd>& a);

/// Appends a null row labeled "ORIGIN" with weight 1.
Configuration augment_origin(const Configuration& c);

}  // namespace affred
