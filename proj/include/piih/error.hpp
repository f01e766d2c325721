#pragma once

#include <stdexcept>
#include <string>

namespace piih {

/// Base of every error raised by the library. The CLI maps these to exit
/// status 1; UsageError maps to 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

/// A fractional power of an algebraic coefficient that does not live in Q(beta).
class UnrepresentableFieldError : public Error {
 public:
  using Error::Error;
};

/// A requested coefficient lies below the truncation order of a series.
class InsufficientOrderError : public Error {
 public:
  using Error::Error;
};

/// Formal integration hit a remainder that is not a total derivative.
class IntegrationError : public Error {
 public:
  using Error::Error;
};

/// Contour quadrature produced a non-negligible imaginary part.
class ContourError : public Error {
 public:
  using Error::Error;
};

class OverflowError : public Error {
 public:
  using Error::Error;
};

/// Some 1 - rho*lambda_i <= 0 in a discretized Fredholm determinant.
class DeterminantSignError : public Error {
 public:
  using Error::Error;
};

class ConsistencyError : public Error {
 public:
  using Error::Error;
};

/// |s| too small for the large-gap root to be isolated.
class RegimeError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace piih
