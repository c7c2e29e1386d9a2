#pragma once

#include <stdexcept>
#include <string>

namespace elastic {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live on different grids or have mismatched lengths.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A query point or argument lies outside the function's domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A tuning parameter is outside its valid range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

class EmptyInputError : public Error {
 public:
  using Error::Error;
};

/// Input is valid in shape but the requested quantity is undefined for it
/// (zero-norm curve, constant regressor, zero-variance samples).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

class InvalidCombinationError : public Error {
 public:
  using Error::Error;
};

/// Malformed file contents. The message carries file name and line number.
class FormatError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace elastic
