#pragma once

#include <stdexcept>
#include <string>

namespace kickbound {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation
/// (non-positive logarithm argument, radius outside a surface, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Caller-supplied data violates a documented precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// The shell ordering e_k < r0 <= a < b (or mu >= 0) does not hold.
class InvalidShell : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class NonFiniteCoefficient : public Error {
 public:
  NonFiniteCoefficient(double r, const std::string& label)
      : Error("coefficient '" + label + "' is not finite at r = " + std::to_string(r)),
        radius(r) {}
  double radius;
};

/// The adaptive step fell below the representable spacing; usually a
/// coefficient singularity inside the interval.
class StepUnderflow : public Error {
 public:
  explicit StepUnderflow(double r)
      : Error("step size underflow at r = " + std::to_string(r)), radius(r) {}
  double radius;
};

class NoSecondZero : public Error {
 public:
  using Error::Error;
};

class DegenerateMu : public Error {
 public:
  DegenerateMu() : Error("mu = 0: use the degenerate branch r^(1/2)(A + B ln r)") {}
};

class DomainMismatch : public Error {
 public:
  using Error::Error;
};

/// The comparison solution vanished inside the Picone window.
class YVanished : public Error {
 public:
  explicit YVanished(double r)
      : Error("comparison solution vanishes at r = " + std::to_string(r) +
              " inside the window"),
        radius(r) {}
  double radius;
};

class ExceedanceViolated : public PreconditionError {
 public:
  explicit ExceedanceViolated(double r)
      : PreconditionError("comparison coefficient falls below the bifurcator at r = " +
                          std::to_string(r)),
        radius(r) {}
  double radius;
};

class WindowTooSmall : public Error {
 public:
  using Error::Error;
};

}  // namespace kickbound
