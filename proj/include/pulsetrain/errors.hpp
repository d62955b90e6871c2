#pragma once

#include <stdexcept>
#include <string>

namespace pulsetrain {

/// Root of the library's exception hierarchy.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid input (negative index, non-normalized amplitudes, bad pulse area...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// A mathematical domain violation (sqrt of a non-positive jet, log of zero...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The Taylor-order formula is outside its domain; sum directly instead.
class PlannerError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// The channel's geometric-sum denominator vanishes.
class DegenerateChannelError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Configuration the closed-form machinery does not model (e.g. beam phase != 0).
class UnsupportedConfiguration : public Error {
 public:
  using Error::Error;
};

/// A computation would exceed its configured term budget.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Insufficient data for a fit.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

}  // namespace pulsetrain
