#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace affred {

/// Bad caller-supplied data: shapes, non-finite entries, out-of-range indices.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The input is well-formed but carries no usable geometry (e.g. every point
/// sits on the chosen origin).
class DegenerateInputError : public InputError {
 public:
  using InputError::InputError;
};

/// A numerical routine failed in a way the caller could not have prevented.
class InternalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bundled data could not be read or failed its checksum.
class LoadError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Local search hit a non-finite objective. Carries the last finite iterate.
class SearchError : public std::runtime_error {
 public:
  SearchError(const std::string& what, Eigen::MatrixXd last_b, double last_value)
      : std::runtime_error(what), last_b_(std::move(last_b)), last_value_(last_value) {}

  const Eigen::MatrixXd& last_b() const { return last_b_; }
  double last_value() const { return last_value_; }

 private:
  Eigen::MatrixXd last_b_;
  double last_value_;
};

}  // namespace affred
