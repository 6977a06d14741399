#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace iernn {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Raised when sampler or argument dimensions disagree.
class DimensionError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

/// Raised for invalid configuration values (gains, activation, path shape).
class ConfigError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a time argument falls outside a sampler's domain.
class RangeError : public std::out_of_range
{
public:
  using std::out_of_range::out_of_range;
};

/// Raised when a chain has no dynamic parameters.
class DynamicsUnavailable : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

enum class Degeneracy { none, constraint, objective };

/// Linear-solve failure on the augmented KKT matrix.
class SolverError : public std::runtime_error
{
public:
  SolverError(const std::string& what, Degeneracy kind, double condition, double t)
  : std::runtime_error(what), kind_(kind), condition_(condition), t_(t)
  {}

  Degeneracy kind() const noexcept { return kind_; }
  /// Estimated condition number (reciprocal of the LU rcond or the J singular value ratio).
  double condition() const noexcept { return condition_; }
  double time() const noexcept { return t_; }

private:
  Degeneracy kind_;
  double condition_;
  double t_;
};

inline void require_dim(Eigen::Index got, Eigen::Index want, const std::string& what)
{
  if (got != want) {
    throw DimensionError(what + ": expected dimension " + std::to_string(want) + ", got " +
                         std::to_string(got));
  }
}

}  // namespace iernn
