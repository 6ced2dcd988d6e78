#pragma once

#include <stdexcept>
#include <string>

namespace nonholorec {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operand sizes do not agree (group dims, coordinate vectors, basis counts).
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Two bundle points were expected to lie in the same fiber.
class FiberMismatchError : public Error {
 public:
  using Error::Error;
};

// Invalid input data or a violated hypothesis; carries the offending residual.
class ValidationError : public Error {
 public:
  ValidationError(const std::string& what, double residual = 0.0)
      : Error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

// A lagrangian or constraint returned inf/nan.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Newton failed. `step` is the trajectory index when known, -1 otherwise.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, int iterations, double residual, int step = -1)
      : Error(what), iterations_(iterations), residual_(residual), step_(step) {}
  int iterations() const { return iterations_; }
  double residual() const { return residual_; }
  int step() const { return step_; }

 private:
  int iterations_;
  double residual_;
  int step_;
};

class SingularJacobianError : public ConvergenceError {
 public:
  using ConvergenceError::ConvergenceError;
};

}  // namespace nonholorec
