#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pud {

/// Base class for every error raised by the toolchain.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input vector length does not match the structure's input count.
class ArityError : public Error {
 public:
  using Error::Error;
};

/// Exhaustive enumeration refused (too many inputs).
class SizeError : public Error {
 public:
  using Error::Error;
};

/// Malformed structure: dangling refs, wrong operand counts, bad config.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Not enough rows or columns for the requested placement.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Attempted write to a constant row, or an illegal TRA/AAP operand.
class RowSafetyError : public Error {
 public:
  using Error::Error;
};

/// Text input could not be parsed. Carries the 1-based line number (0 if unknown).
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A tabular input has a malformed header row.
class HeaderError : public ParseError {
 public:
  using ParseError::ParseError;
};

/// A μProgram command failed. Carries the source line of the failing command.
class ExecutionError : public Error {
 public:
  ExecutionError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A rewrite rule is not truth-preserving.
class RuleVerificationError : public Error {
 public:
  explicit RuleVerificationError(const std::string& rule)
      : Error("rewrite rule '" + rule + "' is not truth-preserving"), rule_(rule) {}
  const std::string& rule() const noexcept { return rule_; }

 private:
  std::string rule_;
};

/// A cache metric is undefined or inconsistent.
class MetricError : public Error {
 public:
  using Error::Error;
};

}  // namespace pud
