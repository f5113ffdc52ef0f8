#pragma once

#include <stdexcept>
#include <string>

namespace confdirac {

/// Arguments outside the mathematical or physical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Iterative numerics that failed to reach the requested accuracy.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Adaptive procedure gave up; carries the best partial result.
class ConvergenceError : public NumericError {
 public:
  ConvergenceError(const std::string& what, double partial, double error_estimate)
      : NumericError(what), partial_(partial), error_estimate_(error_estimate) {}

  double partial() const noexcept { return partial_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double partial_;
  double error_estimate_;
};

/// The supplied energy interval does not enclose a sign change of the matching defect.
class BracketError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// A converged eigenfunction has a node count different from the requested one.
class WrongStateError : public NumericError {
 public:
  WrongStateError(const std::string& what, int expected, int found)
      : NumericError(what), expected_(expected), found_(found) {}

  int expected() const noexcept { return expected_; }
  int found() const noexcept { return found_; }

 private:
  int expected_;
  int found_;
};

/// Rescaled state whose norm integral grows without bound.
class NonNormalizableError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// V1^2 >= V2^2 failed somewhere on the grid.
class ConditionViolation : public DomainError {
 public:
  ConditionViolation(const std::string& what, double radius)
      : DomainError(what), radius_(radius) {}

  double radius() const noexcept { return radius_; }

 private:
  double radius_;
};

}  // namespace confdirac
