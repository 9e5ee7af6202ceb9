#pragma once

#include <vector>

#include <Eigen/Dense>

#include "affred/centering.h"
#include "affred/geometry.h"

namespace affred {

inline constexpr double kDefaultRankTolerance = 1e-10;

/// Centred SVD (I - 1 gamma') X = H diag(lambda_sqrt) G'.
///
/// H is the Mahalanobis canonical form: N x r, orthogonal to gamma, with
/// H'H = I (or H' W H = I when built in weighted mode from a deduplicated
/// configuration). Columns follow the sign rule "largest-magnitude entry
/// positive, lowest row wins ties". Equal singular values leave H defined only
/// up to a rotation of the tied block; compare HH' or D2 in that case.
struct CanonicalForm {
  Eigen::MatrixXd h;
  Eigen::VectorXd lambda_sqrt;
  Eigen::MatrixXd g_t;
  Eigen::Index rank = 0;
  CenteringVector gamma{Eigen::VectorXd::Ones(1)};
  /// Row multiplicities used in weighted mode; empty otherwise.
  Eigen::VectorXd row_weights;

  bool weighted() const { return row_weights.size() > 0; }
  /// H diag(lambda_sqrt) G', i.e. the centred input.
  Eigen::MatrixXd reconstruct() const;
};

/// Rank is the count of singular values above tol * (largest). Throws
/// DegenerateInputError when every point sits on the gamma-origin.
CanonicalForm canonical_form(const Configuration& c, const CenteringVector& g,
                             double tol = kDefaultRankTolerance);

/// Weighted mode for deduplicated input: the SVD is taken of diag(sqrt w)
/// times the centred matrix, then rows are unscaled so that H is per point and
/// H' diag(w) H = I. This is the canonical form of the expanded multiset with
/// each duplicate row collapsed.
CanonicalForm canonical_form_weighted(const Configuration& c, const CenteringVector& g,
                                      double tol = kDefaultRankTolerance);

/// HH', the orthogonal projector onto the centred column space.
Eigen::MatrixXd projector(const CanonicalForm& cf);

/// Merges coincident points. The first copy is kept, weights add, labels are
/// joined with '+'. Input with no coincident pair comes back unchanged.
/// `row_of`, when given, receives the output row of every input point.
Configuration dedup_weighted(const Configuration& c, std::vector<Eigen::Index>* row_of = nullptr);

enum class SimplexKind { kMeanCentered, kPointCentered };

/// Limiting canonical form of N distinct points as p grows without bound.
/// Mean-centred: N equidistant points with pairwise d2 = 2, d2_0 = (N-1)/N.
/// Point-centred: N-1 rows of an identity plus a null row for the origin.
CanonicalForm simplex_h(Eigen::Index n, SimplexKind kind);

/// Flips columns of `m` (and matching rows of `partner_rows`, if any) so each
/// column's largest-magnitude entry is positive.
void apply_sign_convention(Eigen::MatrixXd& m, Eigen::MatrixXd* partner_rows = nullptr);

}  // namespace affred
