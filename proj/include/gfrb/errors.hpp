#pragma once

#include <stdexcept>
#include <string>

namespace gfrb {

/// Invalid user-supplied parameter (non-positive step, k > n, ...).
class ParameterError : public std::invalid_argument {
public:
  explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

/// Input outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Shape mismatch between operators and vectors.
class DimensionError : public std::invalid_argument {
public:
  explicit DimensionError(const std::string& what) : std::invalid_argument(what) {}
};

/// Eigenvalue or root-finding routine failed.
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Observed ||Bx - By|| > 0 with x == y; no Lipschitz operator does that.
class InconsistentOperatorError : public std::runtime_error {
public:
  explicit InconsistentOperatorError(const std::string& what) : std::runtime_error(what) {}
};

/// Resolvent (I + lambda A)^{-1} does not exist for the requested lambda.
class SingularResolventError : public DomainError {
public:
  explicit SingularResolventError(const std::string& what) : DomainError(what) {}
};

}  // namespace gfrb
