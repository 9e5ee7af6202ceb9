#include "affred/optimizer.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <exception>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <thread>

#include "affred/errors.h"

namespace affred {

void SearchOptions::validate() const {
  if (n_starts < 0 || angle_starts < 0) throw InputError("start counts must be non-negative");
  if (n_starts + angle_starts < 1) throw InputError("at least one start is required");
  if (max_iterations < 1) throw InputError("max_iterations must be positive");
  if (!(gradient_tolerance > 0.0) || !(value_dedup_tolerance > 0.0) ||
      !(gram_dedup_tolerance > 0.0)) {
    throw InputError("search tolerances must be positive");
  }
  if (scale_grid.empty()) throw InputError("scale grid is empty");
  for (double s : scale_grid) {
    if (!(s > 0.0) || !std::isfinite(s)) throw InputError("scale grid entries must be positive");
  }
}

std::vector<Eigen::MatrixXd> angle_starts(int k) {
  if (k < 1) throw InputError("angle grid needs at least one angle");
  std::vector<Eigen::MatrixXd> out;
  out.reserve(k);
  for (int j = 0; j < k; ++j) {
    const double phi = std::numbers::pi * j / k;
    Eigen::MatrixXd b(2, 1);
    b << std::sin(phi), std::cos(phi);
    out.push_back(std::move(b));
  }
  return out;
}

std::vector<Eigen::MatrixXd> random_starts(Eigen::Index r, Eigen::Index q, int n,
                                           std::uint64_t seed,
                                           const std::vector<double>& scale_grid) {
  if (q < 1 || q >= r) {
    throw InputError("random starts need 1 <= q < r (got q=" + std::to_string(q) +
                     ", r=" + std::to_string(r) + ")");
  }
  if (scale_grid.empty()) throw InputError("scale grid is empty");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<Eigen::MatrixXd> out;
  out.reserve(n);
  for (int j = 0; j < n; ++j) {
    Eigen::MatrixXd g(r, q);
    for (Eigen::Index c = 0; c < q; ++c) {
      for (Eigen::Index i = 0; i < r; ++i) g(i, c) = normal(rng);
    }
    // Haar-distributed frame: QR with the signs of R's diagonal folded in.
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd frame = qr.householderQ() * Eigen::MatrixXd::Identity(r, q);
    const Eigen::MatrixXd rr = qr.matrixQR().topRows(q).triangularView<Eigen::Upper>();
    for (Eigen::Index c = 0; c < q; ++c) {
      if (rr(c, c) < 0.0) frame.col(c) = -frame.col(c);
    }
    out.push_back(scale_grid[static_cast<std::size_t>(j) % scale_grid.size()] * frame);
  }
  return out;
}

Eigen::MatrixXd canonicalize_b(const Eigen::Ref<const Eigen::MatrixXd>& b) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(b, Eigen::ComputeFullV);
  Eigen::MatrixXd out = b * svd.matrixV();
  apply_sign_convention(out);
  return out;
}

namespace {

constexpr int kHistory = 10;
constexpr int kMaxSaddleEscapes = 20;
constexpr double kArmijo = 1e-4;

using Vec = Eigen::VectorXd;

Eigen::Map<const Eigen::MatrixXd> as_matrix(const Vec& v, Eigen::Index rows, Eigen::Index cols) {
  return {v.data(), rows, cols};
}

struct Evaluation {
  double value;
  Vec grad;
};

class Objective {
 public:
  Objective(const Norm2Evaluator& eval, Eigen::Index rows, Eigen::Index cols)
      : eval_(eval), rows_(rows), cols_(cols) {}

  Evaluation operator()(const Vec& x) const {
    Eigen::MatrixXd g;
    const double v = eval_.value_and_gradient(as_matrix(x, rows_, cols_), g);
    return {v, Eigen::Map<const Vec>(g.data(), g.size())};
  }

  double value(const Vec& x) const { return eval_.value(as_matrix(x, rows_, cols_)); }

 private:
  const Norm2Evaluator& eval_;
  Eigen::Index rows_;
  Eigen::Index cols_;
};

Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> fd_hessian(const Objective& f, const Vec& x) {
  const Eigen::Index dim = x.size();
  const double step = 1e-5 * (1.0 + x.cwiseAbs().maxCoeff());
  Eigen::MatrixXd hess(dim, dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    Vec xp = x;
    Vec xm = x;
    xp[k] += step;
    xm[k] -= step;
    hess.col(k) = (f(xp).grad - f(xm).grad) / (2.0 * step);
  }
  hess = 0.5 * (hess + hess.transpose()).eval();
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(hess);
}

// Looks for a direction of clearly negative curvature at x via a
// finite-difference Hessian of the analytic gradient. On success moves x (and
// its evaluation) to a strictly lower point.
bool escape_saddle(const Objective& f, Vec& x, Evaluation& at_x) {
  const auto eig = fd_hessian(f, x);
  const double lowest = eig.eigenvalues()[0];
  const double spread = std::max(1.0, eig.eigenvalues().cwiseAbs().maxCoeff());
  if (!(lowest < -1e-6 * spread)) return false;

  const Vec dir = eig.eigenvectors().col(0);
  const double threshold = at_x.value - 1e-12 * (1.0 + std::abs(at_x.value));
  for (double t = 0.5 * (1.0 + x.norm()); t > 1e-8; t *= 0.5) {
    for (double sign : {1.0, -1.0}) {
      const Vec trial = x + sign * t * dir;
      const double v = f.value(trial);
      if (std::isfinite(v) && v < threshold) {
        x = trial;
        at_x = f(x);
        return true;
      }
    }
  }
  return false;
}


// Newton step on the finite-difference Hessian, with curvature taken in
// absolute value and flat (gauge) directions dropped. Used once quasi-Newton
// steps stop lowering the value, which happens when the remaining decrease is
// near the rounding level of the objective. Accepts only steps that do not
// raise the value.
bool newton_polish(const Objective& f, Vec& x, Evaluation& at_x) {
  const auto eig = fd_hessian(f, x);
  const Vec& lambda = eig.eigenvalues();
  const double floor = 1e-8 * std::max(1.0, lambda.cwiseAbs().maxCoeff());
  const Vec proj = eig.eigenvectors().transpose() * at_x.grad;
  Vec coef = Vec::Zero(proj.size());
  for (Eigen::Index k = 0; k < proj.size(); ++k) {
    if (std::abs(lambda[k]) > floor) coef[k] = -proj[k] / std::abs(lambda[k]);
  }
  const Vec d = eig.eigenvectors() * coef;
  const double gnorm = at_x.grad.norm();
  double t = 1.0;
  for (int k = 0; k < 30; ++k, t *= 0.5) {
    const Vec trial = x + t * d;
    Evaluation e = f(trial);
    if (!std::isfinite(e.value) || !e.grad.allFinite() || e.value > at_x.value) continue;
    if (e.value < at_x.value || e.grad.norm() < gnorm) {
      x = trial;
      at_x = std::move(e);
      return true;
    }
  }
  return false;
}

}  // namespace

LocalMinimum local_minimize(const Norm2Evaluator& eval, const Eigen::MatrixXd& b0,
                            const SearchOptions& opts) {
  if (b0.rows() != eval.rank()) {
    throw InputError("start has " + std::to_string(b0.rows()) + " rows but H has rank " +
                     std::to_string(eval.rank()));
  }
  require_finite(b0, "start");
  const Eigen::Index rows = b0.rows();
  const Eigen::Index cols = b0.cols();
  const Objective f(eval, rows, cols);

  Vec x = Eigen::Map<const Vec>(b0.data(), b0.size());
  Evaluation cur = f(x);
  if (!std::isfinite(cur.value) || !cur.grad.allFinite()) {
    throw SearchError("objective is not finite at the start", b0, cur.value);
  }

  LocalMinimum out;
  out.start_value = cur.value;
  std::deque<std::pair<Vec, Vec>> history;
  int escapes = 0;
  int iter = 0;

  while (true) {
    const double gnorm = cur.grad.norm();
    if (gnorm < opts.gradient_tolerance * (1.0 + std::abs(cur.value))) {
      if (escapes < kMaxSaddleEscapes && escape_saddle(f, x, cur)) {
        ++escapes;
        history.clear();
        continue;
      }
      out.converged = true;
      break;
    }
    if (iter >= opts.max_iterations) break;

    // Two-loop recursion.
    Vec d = -cur.grad;
    std::vector<double> alphas(history.size());
    for (std::size_t k = history.size(); k-- > 0;) {
      const auto& [s, y] = history[k];
      alphas[k] = s.dot(d) / y.dot(s);
      d -= alphas[k] * y;
    }
    if (!history.empty()) {
      const auto& [s, y] = history.back();
      d *= s.dot(y) / y.squaredNorm();
    }
    for (std::size_t k = 0; k < history.size(); ++k) {
      const auto& [s, y] = history[k];
      const double beta = y.dot(d) / y.dot(s);
      d += (alphas[k] - beta) * s;
    }
    double slope = d.dot(cur.grad);
    if (!(slope < 0.0)) {
      history.clear();
      d = -cur.grad;
      slope = -gnorm * gnorm;
    }

    double alpha = history.empty() ? std::min(1.0, 1.0 / gnorm) : 1.0;
    // Below this the predicted decrease is lost in the rounding of the value.
    const double noise = 1e-13 * (1.0 + std::abs(cur.value));
    std::optional<Evaluation> next;
    Vec trial;
    for (int k = 0; k < 60; ++k) {
      trial = x + alpha * d;
      Evaluation e = f(trial);
      if (std::isfinite(e.value) && e.grad.allFinite()) {
        const bool armijo = e.value <= cur.value + kArmijo * alpha * slope;
        // Near the floor, take any non-increasing step that shrinks the gradient.
        const bool in_noise = -alpha * slope <= noise && e.value <= cur.value &&
                              e.grad.norm() < gnorm;
        if (armijo || in_noise) {
          next = std::move(e);
          break;
        }
      }
      alpha *= std::isfinite(e.value) ? 0.5 : 0.1;
    }
    if (!next || !(next->value < cur.value)) {
      ++iter;
      history.clear();
      if (newton_polish(f, x, cur)) continue;
      break;
    }

    Vec s = trial - x;
    Vec y = next->grad - cur.grad;
    if (s.dot(y) > 1e-12 * s.norm() * y.norm()) {
      history.emplace_back(std::move(s), std::move(y));
      if (static_cast<int>(history.size()) > kHistory) history.pop_front();
    }
    x = std::move(trial);
    cur = std::move(*next);
    ++iter;
  }

  out.b = as_matrix(x, rows, cols);
  out.value = cur.value;
  out.gradient_norm = cur.grad.norm();
  out.iterations = iter;
  return out;
}

LocalMinimum local_minimize(const Eigen::Ref<const Eigen::MatrixXd>& h,
                            const Eigen::MatrixXd& b0, const SearchOptions& opts) {
  const Norm2Evaluator eval(h);
  return local_minimize(eval, b0, opts);
}

ReductionResult reduce(const CanonicalForm& cf, Eigen::Index q, const SearchOptions& opts) {
  opts.validate();
  const Eigen::Index r = cf.rank;
  if (q < 1 || q >= r) {
    throw InputError("target dimension q=" + std::to_string(q) + " must satisfy 1 <= q < r=" +
                     std::to_string(r));
  }
  const Norm2Evaluator eval(cf.h, cf.row_weights);

  std::vector<Eigen::MatrixXd> starts;
  if (r == 2 && q == 1 && opts.angle_starts > 0) starts = angle_starts(opts.angle_starts);
  for (auto& s : random_starts(r, q, opts.n_starts, opts.seed, opts.scale_grid)) {
    starts.push_back(std::move(s));
  }

  const std::size_t total = starts.size();
  std::vector<std::optional<LocalMinimum>> results(total);
  std::vector<std::exception_ptr> errors(total);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k = next++; k < total; k = next++) {
      try {
        results[k] = local_minimize(eval, starts[k], opts);
        results[k]->start_id = static_cast<int>(k);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  unsigned workers = opts.workers != 0 ? opts.workers : std::thread::hardware_concurrency();
  workers = std::clamp<unsigned>(workers, 1, static_cast<unsigned>(total));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  ReductionResult out;
  out.seed = opts.seed;
  out.starts_used = static_cast<int>(total);
  std::optional<LocalMinimum> fallback;
  for (std::size_t k = 0; k < total; ++k) {
    if (errors[k]) {
      try {
        std::rethrow_exception(errors[k]);
      } catch (const SearchError&) {
        ++out.unconverged_starts;
        continue;
      }
    }
    LocalMinimum m = std::move(*results[k]);
    m.b = canonicalize_b(m.b);
    if (!m.converged) {
      ++out.unconverged_starts;
      if (!fallback || m.value < fallback->value) fallback = std::move(m);
      continue;
    }
    const Eigen::MatrixXd gram = m.b * m.b.transpose();
    bool merged = false;
    for (auto& seen : out.local_minima) {
      if (std::abs(seen.value - m.value) < opts.value_dedup_tolerance * (1.0 + std::abs(m.value)) &&
          (seen.b * seen.b.transpose() - gram).norm() < opts.gram_dedup_tolerance) {
        const int hits = seen.hits + 1;
        if (m.value < seen.value) seen = std::move(m);
        seen.hits = hits;
        merged = true;
        break;
      }
    }
    if (!merged) out.local_minima.push_back(std::move(m));
  }
  if (out.local_minima.empty()) {
    if (!fallback) throw InternalError("every local search failed");
    out.local_minima.push_back(std::move(*fallback));
  }
  std::stable_sort(out.local_minima.begin(), out.local_minima.end(),
                   [](const LocalMinimum& a, const LocalMinimum& b) { return a.value < b.value; });

  const LocalMinimum& best = out.local_minima.front();
  out.b = best.b;
  out.z = cf.h * out.b;
  out.value = best.value;
  const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(out.b).singularValues();
  out.rank_deficient = !(sv[sv.size() - 1] > 1e-8 * sv[0]);
  return out;
}

}  // namespace affred
