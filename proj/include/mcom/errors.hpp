#pragma once

#include <stdexcept>
#include <string>

namespace mcom {

// Bad configuration or parameter values. The CLI maps this to exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Base for every failure of a numerical stage. The CLI maps these to exit code 2.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonConvergence : public NumericalError {
 public:
  NonConvergence(const std::string& what, double last_residual, int iterations)
      : NumericalError(what), last_residual_(last_residual), iterations_(iterations) {}
  double last_residual() const noexcept { return last_residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double last_residual_;
  int iterations_;
};

class Diverged : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class EigenvalueFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class UnstableSystem : public NumericalError {
 public:
  UnstableSystem(const std::string& what, double max_real_part)
      : NumericalError(what), max_real_part_(max_real_part) {}
  double max_real_part() const noexcept { return max_real_part_; }

 private:
  double max_real_part_;
};

class SingularSolve : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NonPhysicalState : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace mcom
