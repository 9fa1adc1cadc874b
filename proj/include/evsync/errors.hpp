#pragma once

#include <stdexcept>
#include <string>

namespace evsync {

/// Base class for every error the library raises on bad input or a broken
/// model invariant.  Programming errors (misuse of the C++ API itself) use
/// assert/logic_error instead.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// An invocation names an operation the type does not declare, or carries the
/// wrong number of arguments.
class UndeclaredOp : public Error {
 public:
  using Error::Error;
};

/// A history that was required to be sequential is not.
class NotSequential : public Error {
 public:
  using Error::Error;
};

/// A history violates well-formedness (some per-process projection is not
/// sequential, e.g. a response without a matching prior invocation).
class MalformedHistory : public Error {
 public:
  using Error::Error;
};

/// Trace text does not conform to the trace grammar.
class ParseError : public Error {
 public:
  ParseError(int line, const std::string& reason)
      : Error("parse error at line " + std::to_string(line) + ": " + reason),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// The history holds more operations than the checker's search cap.
class TooLarge : public Error {
 public:
  using Error::Error;
};

/// An index or suffix point lies outside its valid range.
class OutOfRange : public Error {
 public:
  using Error::Error;
};

/// A base command was issued against an object of the wrong kind, an unknown
/// object, or a value of an unexpected kind was unwrapped.
class KindMismatch : public Error {
 public:
  using Error::Error;
};

/// A schedule token is not applicable in the current configuration.
class InvalidSchedule : public Error {
 public:
  using Error::Error;
};

/// The list-reordering step could not fill every slot below its cut point.
/// This signals a bug in the runtime model, not a legal outcome.
class IncompleteView : public Error {
 public:
  using Error::Error;
};

/// A wrapped response does not end with the offset list it should strip.
class NotAPrefix : public Error {
 public:
  using Error::Error;
};

}  // namespace evsync
