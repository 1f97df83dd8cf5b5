#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace infonav {

/// Bad user input: unreadable files, malformed records, unknown labels.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parse failure tied to a line of an input file (1-based).
class ParseError : public InputError {
 public:
  ParseError(const std::string& path, std::size_t line, const std::string& what)
      : InputError(path + ":" + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// The fixed-point iteration ran out of iterations.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double residual, long iterations)
      : std::runtime_error(what), residual_(residual), iterations_(iterations) {}

  double residual() const noexcept { return residual_; }
  long iterations() const noexcept { return iterations_; }

 private:
  double residual_;
  long iterations_;
};

/// Broken internal invariant (support violation, unreachable node, ...).
/// Seeing one of these means a bug, not bad input.
class SolverError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace infonav
