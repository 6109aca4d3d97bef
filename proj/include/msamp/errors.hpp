#pragma once

#include <stdexcept>
#include <string>

namespace msamp {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the operation's domain (band index, coset index, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A parameter inequality required by the sampling theory does not hold.
class ConstraintError : public Error {
 public:
  using Error::Error;
};

/// Cosets of a periodic grid would overlap the next macro point.
class OverlapError : public ConstraintError {
 public:
  using ConstraintError::ConstraintError;
};

/// Coinciding Vandermonde nodes or an otherwise singular linear system.
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// Input that makes a ratio or normalization meaningless (e.g. all-zero data).
class DegenerateError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace msamp
