#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qcor {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unknown, duplicated or misplaced subsystem label.
class LabelError : public Error {
 public:
  using Error::Error;
};

/// An input violates a documented invariant (norm, hermiticity, completeness...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Root finder could not bracket a solution inside its scan window.
class SolverError : public Error {
 public:
  using Error::Error;
};

/// Population reached the top level of a truncated Fock space.
class TruncationError : public Error {
 public:
  using Error::Error;
};

/// A measurement branch or mixture component carries (numerically) zero weight.
class DegenerateBranchError : public Error {
 public:
  using Error::Error;
};

/// An operation was invoked out of sequence for a stateful protocol.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

/// An operation's precondition does not hold for the supplied inputs.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file; carries the 1-based offending line.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace qcor
