#pragma once

#include <stdexcept>
#include <string>

namespace k3 {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live in rings with different variable counts.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Mixed coefficient domains, or an operation unsupported in the domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Division against a basis whose lead coefficients are not units.
class UnsupportedBasisError : public Error {
 public:
  using Error::Error;
};

/// The map does not have full column rank over the rationals.
class RankDeficiencyError : public Error {
 public:
  using Error::Error;
};

class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// A certificate that must hold by construction failed (d*d != 0, ...).
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

/// Fixed-width arithmetic overflowed; callers retry with big integers.
class CoefficientOverflow : public Error {
 public:
  CoefficientOverflow() : Error("coefficient overflow in fixed-width arithmetic") {}
};

}  // namespace k3
