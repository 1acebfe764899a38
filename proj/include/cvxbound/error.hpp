#pragma once

#include <stdexcept>
#include <string>

namespace cvxbound {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter is outside the range an operation accepts.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The requested antiderivative or density normalizer diverges.
class NonIntegrable : public Error {
 public:
  using Error::Error;
};

/// No closed form exists for the requested (functional, family) pair.
class NoClosedForm : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure ran out of its iteration budget.
class NonConvergence : public Error {
 public:
  using Error::Error;
};

/// The operation is not implemented for this density form or dimension.
class Unsupported : public Error {
 public:
  using Error::Error;
};

/// A bound was requested whose validating conditions do not hold.
class ConditionFailed : public Error {
 public:
  using Error::Error;
};

}  // namespace cvxbound
