#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace geclust {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file. `line()` is 1-based, 0 when not line-specific.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Structural violation of the graph data model (self-loop, bad weight, disconnected).
class GraphError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Iterative solve stopped before reaching its residual target.
class SolverError : public NumericalError {
 public:
  SolverError(const std::string& what, double relative_residual, std::size_t iterations)
      : NumericalError(what), relative_residual_(relative_residual), iterations_(iterations) {}
  double relative_residual() const noexcept { return relative_residual_; }
  std::size_t iterations() const noexcept { return iterations_; }

 private:
  double relative_residual_;
  std::size_t iterations_;
};

}  // namespace geclust
