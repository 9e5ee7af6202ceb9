#include "affred/geometry.h"

#include <cmath>
#include <string>

#include "affred/errors.h"

namespace affred {

Configuration::Configuration(Eigen::MatrixXd coords, std::vector<std::string> labels,
                             std::vector<double> weights)
    : coords_(std::move(coords)), labels_(std::move(labels)), weights_(std::move(weights)) {
  if (coords_.rows() < 1 || coords_.cols() < 1) {
    throw InputError("configuration needs at least one point and one coordinate");
  }
  require_finite(coords_, "configuration");
  if (!labels_.empty() && static_cast<Eigen::Index>(labels_.size()) != coords_.rows()) {
    throw InputError("label count " + std::to_string(labels_.size()) +
                     " does not match point count " + std::to_string(coords_.rows()));
  }
  if (!weights_.empty()) {
    if (static_cast<Eigen::Index>(weights_.size()) != coords_.rows()) {
      throw InputError("weight count " + std::to_string(weights_.size()) +
                       " does not match point count " + std::to_string(coords_.rows()));
    }
    for (std::size_t i = 0; i < weights_.size(); ++i) {
      if (!std::isfinite(weights_[i]) || weights_[i] <= 0.0) {
        throw InputError("weight of point " + std::to_string(i) + " must be positive");
      }
    }
  }
}

std::string Configuration::label(Eigen::Index i) const {
  return labels_.empty() ? std::to_string(i + 1) : labels_[i];
}

Eigen::VectorXd Configuration::weight_vector() const {
  if (weights_.empty()) return Eigen::VectorXd::Ones(n());
  return Eigen::Map<const Eigen::VectorXd>(weights_.data(), n());
}

Configuration Configuration::subset(const std::vector<Eigen::Index>& rows) const {
  Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()), p());
  std::vector<std::string> labels;
  std::vector<double> weights;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k] < 0 || rows[k] >= n()) throw InputError("subset row out of range");
    x.row(static_cast<Eigen::Index>(k)) = coords_.row(rows[k]);
    if (has_labels()) labels.push_back(labels_[rows[k]]);
    if (has_weights()) weights.push_back(weights_[rows[k]]);
  }
  return Configuration(std::move(x), std::move(labels), std::move(weights));
}

void require_finite(const Eigen::Ref<const Eigen::MatrixXd>& x, const char* what) {
  if (!x.allFinite()) {
    throw InputError(std::string(what) + " contains non-finite entries");
  }
}

double coincidence_threshold(const Eigen::Ref<const Eigen::MatrixXd>& x) {
  const double max_d0 = x.rows() == 0 ? 0.0 : x.rowwise().squaredNorm().maxCoeff();
  return 1e-18 * (max_d0 + 1.0);
}

SquaredDistances squared_distances(const Eigen::Ref<const Eigen::MatrixXd>& x) {
  require_finite(x, "coordinates");
  const Eigen::Index n = x.rows();
  SquaredDistances out{Eigen::MatrixXd::Zero(n, n)};
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const double d = (x.row(i) - x.row(j)).squaredNorm();
      out.d2(i, j) = d;
      out.d2(j, i) = d;
    }
  }
  return out;
}

SquaredDistances squared_distances(const Configuration& c) { return squared_distances(c.coords()); }

OriginDistances origin_sq_distances(const Eigen::Ref<const Eigen::MatrixXd>& x) {
  require_finite(x, "coordinates");
  return {x.rowwise().squaredNorm()};
}

OriginDistances origin_sq_distances(const Configuration& c) {
  return origin_sq_distances(c.coords());
}

Eigen::MatrixXd association_matrix(const Configuration& c) {
  return c.coords() * c.coords().transpose();
}

SquaredDistances reconstruct_d2(const Eigen::Ref<const Eigen::MatrixXd>& a) {
  if (a.rows() != a.cols()) throw InputError("association matrix must be square");
  require_finite(a, "association matrix");
  const double scale = a.cwiseAbs().maxCoeff();
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-10 * (scale + 1e-300)) {
    throw InputError("association matrix is not symmetric");
  }
  const Eigen::VectorXd d0 = a.diagonal();
  const Eigen::Index n = a.rows();
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
  SquaredDistances out{d0 * ones.transpose() + ones * d0.transpose() - 2.0 * a};
  // Exact symmetry and zero diagonal regardless of round-off in `a`.
  out.d2 = 0.5 * (out.d2 + out.d2.transpose()).eval();
  out.d2.diagonal().setZero();
  return out;
}

Configuration augment_origin(const Configuration& c) {
  const Eigen::Index n = c.n();
  Eigen::MatrixXd x(n + 1, c.p());
  x.topRows(n) = c.coords();
  x.row(n).setZero();
  std::vector<std::string> labels;
  labels.reserve(n + 1);
  for (Eigen::Index i = 0; i < n; ++i) labels.push_back(c.label(i));
  labels.emplace_back("ORIGIN");
  std::vector<double> weights;
  if (c.has_weights()) {
    weights = c.weights();
    weights.push_back(1.0);
  }
  return Configuration(std::move(x), std::move(labels), std::move(weights));
}

}  // namespace affred
