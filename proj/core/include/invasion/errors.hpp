#pragma once

#include <stdexcept>
#include <string>

namespace invasion {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A point query fell outside the computational square Y.
class OutOfDomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid geometric input (non-square domain, disc touching the boundary, ...).
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// The tumour region or its interface degenerated (no cut cells, area below one cell).
class DegenerateDomainError : public Error {
 public:
  using Error::Error;
};

/// Newton iteration did not reach the requested tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double last_residual)
      : Error(what), last_residual_(last_residual) {}
  double last_residual() const noexcept { return last_residual_; }

 private:
  double last_residual_;
};

/// Sparse factorization failed or did not reach the residual contract.
class SolverError : public Error {
 public:
  using Error::Error;
};

/// Config text could not be parsed or validated. `line()` is 0 when not tied to a line.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, int line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// A driver phase was invoked out of order.
class PhaseError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace invasion
