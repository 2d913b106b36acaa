// Error hierarchy shared by every module. Each category maps to a distinct
// CLI exit code (see tools/trs_cli.cpp).
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace trs {

/// Base of all toolkit errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad arguments: dimension mismatch, infeasible start, unknown kind.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Invalid solver configuration (step size outside its admissible range, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// The request needs a capability that is unavailable for this instance,
/// e.g. a dense eigendecomposition above the configured dimension cap.
class CapabilityError : public Error {
 public:
  using Error::Error;
};

/// A solver produced a result that violates one of its guarantees.
class SolverAnomaly : public Error {
 public:
  using Error::Error;
};

/// Malformed problem text. `line()` is 1-based; 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace trs
