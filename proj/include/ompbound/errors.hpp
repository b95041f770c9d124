#pragma once

#include <stdexcept>
#include <string>

namespace ompbound {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad dimensions, out-of-range arguments, empty supports.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Mathematically valid input outside the domain of a formula.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Numerically degenerate instance: rank-deficient column subset, zero column.
class DegeneracyError : public Error {
 public:
  using Error::Error;
};

/// A requested enumeration exceeds the configured cap.
class CapacityError : public Error {
 public:
  using Error::Error;
};

}  // namespace ompbound
