#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace invex2d {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression or problem-file text. `position` is a byte offset
/// into the offending line; `line` is 1-based, or 0 for bare expressions.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t position,
             std::size_t line = 0)
      : Error(message), position_(position), line_(line) {}

  std::size_t position() const { return position_; }
  std::size_t line() const { return line_; }

 private:
  std::size_t position_;
  std::size_t line_;
};

/// Evaluation left the natural domain of an expression (log of a
/// non-positive value, division by zero, ...).
class DomainError : public Error {
 public:
  DomainError(const std::string& message, std::string subexpression)
      : Error(message + " in '" + subexpression + "'"),
        subexpression_(std::move(subexpression)) {}

  const std::string& subexpression() const { return subexpression_; }

 private:
  std::string subexpression_;
};

/// Constraint gradients are zero or linearly dependent at a point.
class LicqError : public Error {
 public:
  using Error::Error;
};

/// More than two non-redundant constraints are active at a point.
class DegenerateVertexError : public Error {
 public:
  using Error::Error;
};

/// Invalid model: unbounded box, duplicate constraint names, bad parameters.
class ModelError : public Error {
 public:
  using Error::Error;
};

/// An operation was called outside its documented precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Boundary continuation failed (runaway curve, step control exhausted,
/// corner orientation violated).
class TraceError : public Error {
 public:
  using Error::Error;
};

/// The oracle grid contains no feasible point.
class EmptyFeasibleError : public Error {
 public:
  using Error::Error;
};

/// The objective does not vary along the requested line.
class ConstantOnLineError : public Error {
 public:
  using Error::Error;
};

}  // namespace invex2d
