#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gsq {

// Base error. `reason()` is a short machine-parsable code; what() carries detail.
class Error : public std::runtime_error {
 public:
  Error(std::string reason, const std::string& detail)
      : std::runtime_error(detail), reason_(std::move(reason)) {}

  const std::string& reason() const noexcept { return reason_; }

 private:
  std::string reason_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& detail)
      : Error("parse", "line " + std::to_string(line) + ": " + detail), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// A verified negative answer (no partition under eps, no nice block, ...).
// The CLI maps it to exit status 2.
class Infeasible : public Error {
 public:
  explicit Infeasible(const std::string& detail) : Error("infeasible", detail) {}
};

// Thrown when a constructive procedure's own postcondition fails.
class InvariantViolation : public Error {
 public:
  explicit InvariantViolation(const std::string& detail) : Error("invariant", detail) {}
};

inline void require(bool cond, const char* reason, const std::string& detail) {
  if (!cond) throw Error(reason, detail);
}

inline void ensure(bool cond, const std::string& detail) {
  if (!cond) throw InvariantViolation(detail);
}

}  // namespace gsq
