#pragma once

#include <stdexcept>
#include <string>

namespace kptau {

// Every failure raised by the library derives from Error so callers can
// catch one type; the subclasses let the CLI and tests tell them apart.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A soft size guard was exceeded (partition weight, matrix order, ...).
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// An index fell outside the stored window of a sequence or frame.
class WindowError : public Error {
 public:
  using Error::Error;
};

/// Eigenvalues coincide (or nearly so) where a Vandermonde ratio is needed.
class DegeneracyError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the region where a series or integral converges.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A coupled Gaussian integral does not converge (4 sigma1 sigma2 <= 1).
class DivergenceError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Malformed input: bad partition text, invalid family parameters, JSON shape.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace kptau
