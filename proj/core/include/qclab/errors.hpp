#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace qclab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed grid, mismatched field shapes, bad configuration values.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// k >= 1 or otherwise unusable dilatation bound.
class InvalidBoundError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Evaluation point outside the sampled square or outside the map's image.
class OutOfDomainError : public Error {
 public:
  using Error::Error;
};

/// Grid too coarse for the requested geometry or quadrature did not settle.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

/// Jacobian below threshold where a pushforward needs it.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double last_residual, int iterations)
      : Error(what), last_residual_(last_residual), iterations_(iterations) {}
  double last_residual() const noexcept { return last_residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double last_residual_;
  int iterations_;
};

// Non-fatal diagnostics. Default sink writes to stderr; tests swap it out.
using WarningSink = std::function<void(const std::string&)>;
void set_warning_sink(WarningSink sink);
void warn(const std::string& message);

}  // namespace qclab
