#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace spin_stirling {

// Base for every error thrown by the library. Callers that only want to
// distinguish "our" failures from std:: ones can catch this.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A precondition on an argument or a domain-type invariant was violated.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// |J/(k_B T)| exceeded the cap of a path that evaluates raw exponentials.
class OverflowError : public Error {
 public:
  using Error::Error;
};

// An operation that only makes sense in one operation mode was asked for in
// another (e.g. efficiency outside heat-engine mode).
class ModeError : public Error {
 public:
  using Error::Error;
};

// Malformed or insufficient input data. `line()` is 1-based, 0 if unknown.
class DataError : public Error {
 public:
  explicit DataError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace spin_stirling
