#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qmle {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller violated a documented precondition (bad dimension, empty input, ...).
class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

/// The underlying eigensolver failed to converge.
class DecompositionError : public Error {
 public:
  using Error::Error;
};

/// A likelihood term tr(A_i rho) fell below the representable floor. The
/// iterates of the solvers in this library are full rank, so hitting this
/// signals a caller bug rather than an algorithmic state.
class SingularLikelihoodError : public Error {
 public:
  SingularLikelihoodError(std::size_t operator_index, double trace_value)
      : Error("singular likelihood: tr(A_" + std::to_string(operator_index) +
              " rho) = " + std::to_string(trace_value)),
        operator_index_(operator_index) {}

  std::size_t operator_index() const noexcept { return operator_index_; }

 private:
  std::size_t operator_index_;
};

/// An iterative routine exhausted its iteration budget.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// A quantity that must be positive came out non-positive (e.g. tr(R rho R)).
class NumericDegeneracyError : public Error {
 public:
  using Error::Error;
};

/// A probability left its admissible range by more than rounding allows.
class ModelViolationError : public Error {
 public:
  using Error::Error;
};

/// A dataset or config file could not be parsed.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A dataset file declares a format version this build does not support.
class VersionError : public Error {
 public:
  using Error::Error;
};

/// Filesystem-level failure (missing file, unwritable path).
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace qmle
