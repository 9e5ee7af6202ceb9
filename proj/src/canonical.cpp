#include "affred/canonical.h"

#include <cmath>
#include <string>

#include "affred/errors.h"

namespace affred {

Eigen::MatrixXd CanonicalForm::reconstruct() const {
  return h * lambda_sqrt.asDiagonal() * g_t;
}

void apply_sign_convention(Eigen::MatrixXd& m, Eigen::MatrixXd* partner_rows) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    const double biggest = m.col(j).cwiseAbs().maxCoeff();
    if (biggest == 0.0) continue;
    Eigen::Index pick = 0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (std::abs(m(i, j)) >= biggest * (1.0 - 1e-12)) {
        pick = i;
        break;
      }
    }
    if (m(pick, j) < 0.0) {
      m.col(j) = -m.col(j);
      if (partner_rows != nullptr) partner_rows->row(j) = -partner_rows->row(j);
    }
  }
}

namespace {

CanonicalForm decompose(const Configuration& c, const CenteringVector& g, double tol,
                        bool weighted) {
  if (c.n() < 2) throw InputError("canonical form needs at least two points");
  if (!(tol > 0.0 && tol < 1.0)) throw InputError("rank tolerance must lie in (0, 1)");

  const Eigen::MatrixXd xc = center(c.coords(), g);
  if (xc.cwiseAbs().maxCoeff() == 0.0) {
    throw DegenerateInputError("every point coincides with the chosen origin");
  }

  Eigen::VectorXd sqrt_w;
  Eigen::MatrixXd m = xc;
  if (weighted) {
    sqrt_w = c.weight_vector().cwiseSqrt();
    m = sqrt_w.asDiagonal() * xc;
  }

  Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  Eigen::Index r = 0;
  while (r < sv.size() && sv[r] > tol * sv[0]) ++r;
  if (r == 0) throw DegenerateInputError("centred configuration has rank zero");

  CanonicalForm cf;
  cf.h = svd.matrixU().leftCols(r);
  cf.lambda_sqrt = sv.head(r);
  cf.g_t = svd.matrixV().leftCols(r).transpose();
  cf.rank = r;
  cf.gamma = g;
  if (weighted) {
    cf.h = sqrt_w.cwiseInverse().asDiagonal() * cf.h;
    cf.row_weights = c.weight_vector();
  }
  apply_sign_convention(cf.h, &cf.g_t);
  return cf;
}

}  // namespace

CanonicalForm canonical_form(const Configuration& c, const CenteringVector& g, double tol) {
  return decompose(c, g, tol, false);
}

CanonicalForm canonical_form_weighted(const Configuration& c, const CenteringVector& g,
                                      double tol) {
  return decompose(c, g, tol, true);
}

Eigen::MatrixXd projector(const CanonicalForm& cf) { return cf.h * cf.h.transpose(); }

Configuration dedup_weighted(const Configuration& c, std::vector<Eigen::Index>* row_of) {
  const Eigen::Index n = c.n();
  const double threshold = coincidence_threshold(c.coords());
  std::vector<Eigen::Index> owner(n);
  bool merged = false;
  for (Eigen::Index i = 0; i < n; ++i) {
    owner[i] = i;
    for (Eigen::Index j = 0; j < i; ++j) {
      if (owner[j] == j && (c.coords().row(i) - c.coords().row(j)).squaredNorm() < threshold) {
        owner[i] = j;
        merged = true;
        break;
      }
    }
  }
  if (row_of != nullptr) {
    row_of->assign(static_cast<std::size_t>(n), 0);
    Eigen::Index next = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      (*row_of)[i] = owner[i] == i ? next++ : (*row_of)[owner[i]];
    }
  }
  if (!merged) return c;

  std::vector<Eigen::Index> keep;
  std::vector<std::string> labels;
  std::vector<double> weights;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (owner[i] != i) continue;
    keep.push_back(i);
    std::string label = c.label(i);
    double w = c.weight(i);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (owner[j] == i) {
        label += "+" + c.label(j);
        w += c.weight(j);
      }
    }
    labels.push_back(std::move(label));
    weights.push_back(w);
  }
  Eigen::MatrixXd x(static_cast<Eigen::Index>(keep.size()), c.p());
  for (std::size_t k = 0; k < keep.size(); ++k) x.row(static_cast<Eigen::Index>(k)) = c.coords().row(keep[k]);
  return Configuration(std::move(x), std::move(labels), std::move(weights));
}

CanonicalForm simplex_h(Eigen::Index n, SimplexKind kind) {
  if (n < 2) throw InputError("simplex needs at least two points");
  const Eigen::Index r = n - 1;
  CanonicalForm cf;
  cf.rank = r;
  cf.lambda_sqrt = Eigen::VectorXd::Ones(r);
  cf.g_t = Eigen::MatrixXd::Identity(r, r);
  if (kind == SimplexKind::kMeanCentered) {
    // Helmert basis of the complement of 1.
    cf.h = Eigen::MatrixXd::Zero(n, r);
    for (Eigen::Index k = 1; k <= r; ++k) {
      const double kk = static_cast<double>(k);
      const double scale = 1.0 / std::sqrt(kk * (kk + 1.0));
      cf.h.col(k - 1).head(k).setConstant(scale);
      cf.h(k, k - 1) = -kk * scale;
    }
    apply_sign_convention(cf.h, &cf.g_t);
    cf.gamma = mean_gamma(n);
  } else {
    cf.h = Eigen::MatrixXd::Zero(n, r);
    cf.h.topRows(r).setIdentity();
    cf.gamma = point_gamma(n, n - 1);
  }
  return cf;
}

}  // namespace affred
