#pragma once

#include <stdexcept>
#include <string>

namespace cc {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input: dimension mismatches, bad scenario files, unresolved names.
struct ConfigError : Error {
  using Error::Error;
};

// Integration trajectory left the coordinate domain.
struct DomainEscapeError : Error {
  double exit_time;
  DomainEscapeError(const std::string& msg, double t) : Error(msg), exit_time(t) {}
};

// Newton inversion of the exponential chart did not reach tolerance.
struct InversionError : Error {
  double residual;
  InversionError(const std::string& msg, double r) : Error(msg), residual(r) {}
};

// The horizontal block does not induce a graded homomorphism.
struct NotExtendableError : Error {
  double residual;
  NotExtendableError(const std::string& msg, double r) : Error(msg), residual(r) {}
};

// Horizontal generation fails at the requested point.
struct EquiregularityError : Error {
  using Error::Error;
};

// An estimator would exceed its configured cell or memory cap.
struct ResourceError : Error {
  using Error::Error;
};

// Nonpositive values handed to a log-log fit.
struct DegenerateDataError : Error {
  using Error::Error;
};

}  // namespace cc
