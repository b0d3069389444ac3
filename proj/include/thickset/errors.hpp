#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace thickset {

/// Base of every error thrown by the library. `exit_code()` is what the CLI
/// returns when the error escapes a verb.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual int exit_code() const noexcept { return 1; }
};

/// Input outside an operation's domain (zero scale, alpha outside (0,1), ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A value requested outside the range a map can produce.
class RangeError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what, std::size_t offset = 0)
      : Error(what), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// A theorem's hypothesis does not hold for the given input; the message
/// names the violated condition.
class HypothesisError : public Error {
 public:
  using Error::Error;
};

/// A conclusion that the mathematics guarantees under already-validated
/// hypotheses failed. Either the hypothesis check or the implementation is
/// wrong, so these are never recoverable.
class InternalContradiction : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 2; }
};

/// Certified enclosures were too coarse to decide a question at the depth or
/// precision available.
class PrecisionError : public Error {
 public:
  using Error::Error;
};

/// A refinement family was not deep enough; `required_depth()` is a hint for
/// the retry.
class InsufficientDepth : public Error {
 public:
  InsufficientDepth(const std::string& what, std::size_t required_depth)
      : Error(what), required_depth_(required_depth) {}
  std::size_t required_depth() const noexcept { return required_depth_; }

 private:
  std::size_t required_depth_;
};

class ConstructionError : public Error {
 public:
  using Error::Error;
};

class CalibrationFailure : public Error {
 public:
  using Error::Error;
};

class VerificationFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace thickset
