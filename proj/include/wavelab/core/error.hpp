#pragma once

#include <stdexcept>
#include <string>

namespace wavelab {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid input or violated precondition. The CLI maps these to exit code 2.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A computation that could not complete. The CLI maps these to exit code 1.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class GridError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NormalizationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class LinearSolveError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Particle sits in a region where |psi|^2 is below the guidance floor.
class NodeRegionError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class CflError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Slits transmit (effectively) nothing.
class TransmissionError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Too much negative flux through the screen plane.
class BackflowError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Refraction impossible: sin(theta2) would exceed one.
class NoTransmission : public Error {
 public:
  explicit NoTransmission(double sin_theta2, const std::string& what = "no transmission")
      : Error(what), sin_theta2_(sin_theta2) {}
  double sin_theta2() const noexcept { return sin_theta2_; }

 private:
  double sin_theta2_;
};

class TotalInternalReflection : public NoTransmission {
 public:
  explicit TotalInternalReflection(double sin_theta2)
      : NoTransmission(sin_theta2, "total internal reflection") {}
};

}  // namespace wavelab
