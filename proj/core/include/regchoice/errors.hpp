#pragma once

#include <stdexcept>
#include <string>

namespace regchoice {

/// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bad grid, mismatched sizes, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A sampled kernel or function produced a non-finite value.
class EvaluationError : public Error {
 public:
  EvaluationError(const std::string& what, double x, double s)
      : Error(what), x_(x), s_(s) {}

  double x() const { return x_; }
  double s() const { return s_; }

 private:
  double x_;
  double s_;
};

/// The dense regularized system could not be solved.
class SolverFailure : public Error {
 public:
  SolverFailure(const std::string& what, double rcond) : Error(what), rcond_(rcond) {}

  /// Reciprocal condition estimate of the factorized matrix.
  double rcond() const { return rcond_; }

 private:
  double rcond_;
};

/// The discrepancy function had no sign change on the search bracket.
class BracketFailure : public Error {
 public:
  BracketFailure(const std::string& what, double gap_at_lo, double gap_at_hi)
      : Error(what), gap_at_lo_(gap_at_lo), gap_at_hi_(gap_at_hi) {}

  double gap_at_lo() const { return gap_at_lo_; }
  double gap_at_hi() const { return gap_at_hi_; }

 private:
  double gap_at_lo_;
  double gap_at_hi_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace regchoice
