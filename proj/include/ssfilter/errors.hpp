#pragma once

#include <stdexcept>
#include <string>

namespace ssfilter {

/// Base of every error raised by the library. `exit_code()` is what the CLI
/// returns when the error escapes a job.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual int exit_code() const noexcept { return 4; }
};

// Configuration problems (exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 2; }
};

class DifferentialsUnavailable : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class DegenerationUnknown : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// Parameter outside the range where a family is defined (exit code 3).
class RangeError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 3; }
};

class StableRangeError : public RangeError {
 public:
  using RangeError::RangeError;
};

class ColumnRangeError : public RangeError {
 public:
  using RangeError::RangeError;
};

class InvalidShape : public RangeError {
 public:
  using RangeError::RangeError;
};

// Internal invariant violations (exit code 4).
class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

class CompositionNonzero : public Error {
 public:
  using Error::Error;
};

class AlgebraMismatch : public Error {
 public:
  using Error::Error;
};

class NotInvariant : public Error {
 public:
  using Error::Error;
};

}  // namespace ssfilter
