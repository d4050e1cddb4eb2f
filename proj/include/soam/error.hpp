#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace soam {

/// Caller violated a precondition (bad id, mismatched dimension, invalid parameter).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed input text. `line()` is 1-based, 0 when no line applies.
class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Operation not defined for the given input kind (e.g. no analytic medial axis).
class UnsupportedError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace soam
