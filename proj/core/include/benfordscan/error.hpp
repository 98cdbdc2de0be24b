#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace benfordscan {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller violated a documented precondition (mismatched supports, schema
/// width, non-positive limits).
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Malformed input: a row or line that cannot be read in its declared format.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::string field, const std::string& what)
      : Error("line " + std::to_string(line) + ", field '" + field + "': " + what),
        line_(line),
        field_(std::move(field)) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::size_t line_;
  std::string field_;
};

/// Well-formed input that breaks a data invariant (negative value, duplicate
/// hash, bad address).
class ValidationError : public ParseError {
 public:
  using ParseError::ParseError;
};

class LabelConflictError : public Error {
 public:
  using Error::Error;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

/// The value has no significant digit (zero or negative).
class NoSignificantDigitError : public Error {
 public:
  using Error::Error;
};

class EmptyDistributionError : public Error {
 public:
  using Error::Error;
};

class SplitError : public Error {
 public:
  using Error::Error;
};

class TrainingError : public Error {
 public:
  using Error::Error;
};

class DataError : public Error {
 public:
  using Error::Error;
};

}  // namespace benfordscan
