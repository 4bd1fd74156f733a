#pragma once

#include <stdexcept>
#include <string>

namespace netinfer {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A matrix that must be inverted is singular or too ill-conditioned.
class SingularMatrixError : public Error {
 public:
  SingularMatrixError(const std::string& msg, double condition)
      : Error(msg), condition_number(condition) {}
  double condition_number;
};

/// The matrix-logarithm series cannot converge (||M - I|| >= 1).
class DivergentSeriesError : public Error {
 public:
  using Error::Error;
};

/// An iteration hit its limit without meeting its tolerance.
class NoConvergenceError : public Error {
 public:
  using Error::Error;
};

/// L does not have a (numerically) diagonal Jordan form.
class NonDiagonalizableError : public Error {
 public:
  using Error::Error;
};

/// All entries of the feedback-product estimate are below the exclusion
/// threshold; no feedback structure is detectable.
class EmptyIndexSetError : public Error {
 public:
  using Error::Error;
};

/// State magnitude exceeded the representable range during simulation.
class OverflowError : public Error {
 public:
  OverflowError(const std::string& msg, long step_index)
      : Error(msg), step(step_index) {}
  long step;
};

}  // namespace netinfer
