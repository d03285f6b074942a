#pragma once

#include <stdexcept>
#include <string>

namespace confgeo {

// Base class for all library errors.  Subclasses name the failure mode so
// callers (and the CLI exit-code mapping) can distinguish bad input from
// numerical breakdown.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Input / configuration problems (CLI exit code 2).
class BadParams : public Error {
 public:
  using Error::Error;
};

class ConfigError : public BadParams {
 public:
  using BadParams::BadParams;
};

class DimensionTooSmall : public BadParams {
 public:
  using BadParams::BadParams;
};

class OddDimension : public BadParams {
 public:
  using BadParams::BadParams;
};

// Numerical / domain failures (CLI exit code 1).
class NumericalError : public Error {
 public:
  using Error::Error;
};

class SingularMetric : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NullVelocity : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ZeroFactor : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class PoleHit : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class PatchExit : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class StepSizeUnderflow : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NoConvergence : public NumericalError {
 public:
  NoConvergence(const std::string& msg, int iterations, double best_residual)
      : NumericalError(msg), iterations(iterations), best_residual(best_residual) {}
  int iterations = 0;
  double best_residual = 0.0;
};

}  // namespace confgeo
