#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace frachs {

/// Base class of all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Evaluation outside the domain of a map (the pole of T, the unit sphere).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid parameter value (n, alpha, p, R, cutoffs, grids).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition or postcondition contract was violated.
class ContractError : public Error {
 public:
  using Error::Error;
};

/// A singular integral failed to stabilise under cutoff refinement.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, std::string where, long step = -1)
      : Error(what), where_(std::move(where)), step_(step) {}

  /// Label of the offending field or stage.
  const std::string& where() const noexcept { return where_; }
  /// Iteration step, or -1 when not inside an iteration.
  long step() const noexcept { return step_; }

 private:
  std::string where_;
  long step_;
};

}  // namespace frachs
