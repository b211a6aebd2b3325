#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace wu {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A point or parameter lies outside the set where an operation is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A simplex or point set is unbounded or has empty extent along an axis.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// Fixed intercepts leave no feasible simplex.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// The requested combination is outside what the library computes.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// A radial evaluator has no per-axis boundedness metadata.
class UnknownBoundednessError : public Error {
 public:
  using Error::Error;
};

/// The convex solver stopped before reaching the requested gap.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, double gap) : Error(what), gap_(gap) {}
  double gap() const noexcept { return gap_; }

 private:
  double gap_;
};

/// Malformed configuration or an experiment parameter out of range.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what, int line = 0, std::string field = {})
      : Error(what), line_(line), field_(std::move(field)) {}
  int line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  int line_;
  std::string field_;
};

}  // namespace wu
