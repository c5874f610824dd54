#pragma once

#include <stdexcept>
#include <string>

namespace jsflow {

/// Base class for all errors raised by the toolkit.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A parameter or configuration value violates its documented range.
class InvalidParameter : public Error {
public:
  using Error::Error;
};

/// The in-plane Lyapunov system became singular; the caller must reduce h_t.
class StepTooLarge : public Error {
public:
  using Error::Error;
};

/// A conformation update produced a tensor that is not positive definite.
class PositivityLoss : public Error {
public:
  using Error::Error;
};

/// Linear solver failure (singular operator or residual above tolerance).
class SolverError : public Error {
public:
  using Error::Error;
};

/// Malformed or incompatible input file.
class FormatError : public Error {
public:
  using Error::Error;
};

}  // namespace jsflow
