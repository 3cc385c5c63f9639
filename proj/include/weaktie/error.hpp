#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace weaktie {

/// Invalid graph input (self-loop, bad weight) or invalid query arguments.
class GraphError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed dataset text. Carries the 1-based line number where parsing
/// stopped (0 when the problem is not tied to a line, e.g. a missing header).
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what
                                : what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A dataset file could not be opened or read.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Experiment-level failure: degenerate split, bad parameters, empty probe.
class ExperimentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace weaktie
