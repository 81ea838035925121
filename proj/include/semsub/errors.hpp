#pragma once

#include <stdexcept>
#include <string>

namespace semsub {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shape or size violations (mismatched dimensions, out-of-range k, ...).
struct DimensionError : Error {
  using Error::Error;
};

// Bad values: non-finite entries, zero columns, violated preconditions.
struct ValueError : Error {
  using Error::Error;
};

// An iterative kernel exhausted its budget without meeting its tolerance.
struct ConvergenceError : Error {
  ConvergenceError(const std::string& what, double residual)
      : Error(what), residual(residual) {}
  double residual;
};

// The solver produced a non-finite objective. Signals a kernel bug or
// pathological inputs, not a normal stopping condition.
struct DivergenceError : Error {
  using Error::Error;
};

// File and serialization problems (CLI layer).
struct IoError : Error {
  using Error::Error;
};

// Command-line / config-file problems (unknown keys, malformed values).
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace semsub
