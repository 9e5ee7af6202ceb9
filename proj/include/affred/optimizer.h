#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "affred/canonical.h"
#include "affred/objective.h"

namespace affred {

struct SearchOptions {
  int n_starts = 64;
  std::uint64_t seed = 1;
  int max_iterations = 2000;
  double gradient_tolerance = 1e-9;
  /// Relative: two minima match when |v1 - v2| < tol * (1 + v1).
  double value_dedup_tolerance = 1e-6;
  /// Frobenius distance between the BB' of two minima.
  double gram_dedup_tolerance = 1e-5;
  std::vector<double> scale_grid{0.25, 0.5, 0.75, 1.0};
  /// Extra unit-length starts on an angle grid, used only when r = 2, q = 1.
  int angle_starts = 36;
  /// Threads used to run starts; 0 picks the hardware concurrency.
  unsigned workers = 0;

  /// Throws InputError on non-positive counts or tolerances.
  void validate() const;
};

struct LocalMinimum {
  Eigen::MatrixXd b;
  double value = 0.0;
  double start_value = 0.0;
  double gradient_norm = 0.0;
  int start_id = 0;
  int iterations = 0;
  bool converged = false;
  /// Starts that landed on this minimum (filled in by reduce).
  int hits = 1;
};

struct ReductionResult {
  Eigen::MatrixXd b;
  Eigen::MatrixXd z;
  double value = 0.0;
  /// Distinct endpoints, ascending by value.
  std::vector<LocalMinimum> local_minima;
  std::uint64_t seed = 0;
  int starts_used = 0;
  int unconverged_starts = 0;
  /// Set when the best B has rank below q (smallest singular value at most
  /// 1e-8 times the largest).
  bool rank_deficient = false;
};

/// Unit vectors (sin phi, cos phi)' for phi = j*pi/k, j = 0..k-1.
std::vector<Eigen::MatrixXd> angle_starts(int k);

/// n random r x q orthonormal frames, frame j scaled by scale_grid[j % size].
/// Deterministic in the seed. Requires 1 <= q < r.
std::vector<Eigen::MatrixXd> random_starts(Eigen::Index r, Eigen::Index q, int n,
                                           std::uint64_t seed,
                                           const std::vector<double>& scale_grid);

/// Limited-memory BFGS from b0 with an Armijo backtracking line search, so
/// accepted steps never raise the objective. A converged point whose Hessian
/// has a clearly negative eigenvalue is treated as a saddle: the search steps
/// off along that direction and continues.
LocalMinimum local_minimize(const Norm2Evaluator& eval, const Eigen::MatrixXd& b0,
                            const SearchOptions& opts);
LocalMinimum local_minimize(const Eigen::Ref<const Eigen::MatrixXd>& h,
                            const Eigen::MatrixXd& b0, const SearchOptions& opts);

/// B Q with Q orthogonal such that B'B is diagonal and descending, columns
/// sign-normalized. BB' is unchanged.
Eigen::MatrixXd canonicalize_b(const Eigen::Ref<const Eigen::MatrixXd>& b);

/// Multi-start search for the rank-q affine reduction Z = HB of a canonical
/// form. Weighted canonical forms use their row weights in the objective.
ReductionResult reduce(const CanonicalForm& cf, Eigen::Index q, const SearchOptions& opts);

}  // namespace affred
