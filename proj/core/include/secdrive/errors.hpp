#pragma once

#include <stdexcept>
#include <string>

namespace secdrive {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad caller input: dimension mismatch, invalid spin label, bad pulse spec.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Evaluation too close to a pole of the secant field.
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// Spherical-coordinate quantity requested at theta = 0 or pi.
class CoordinateSingularity : public Error {
 public:
  using Error::Error;
};

class DegeneratePath : public Error {
 public:
  using Error::Error;
};

/// Numerical failures. Carry the name of the failing operation.
class NumericalError : public Error {
 public:
  NumericalError(std::string op, const std::string& what)
      : Error(op + ": " + what), op_(std::move(op)) {}
  const std::string& op() const noexcept { return op_; }

 private:
  std::string op_;
};

class StepUnderflow : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class MaxStepsExceeded : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NonConvergence : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class OverlapTooSmall : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace secdrive
