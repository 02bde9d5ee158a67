#pragma once

#include <stdexcept>
#include <string>

namespace mms {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Incompatible tensor shapes or invalid structural arguments.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A forward op produced NaN/Inf, or training hit a non-finite value.
class NumericFault : public Error {
 public:
  using Error::Error;
};

/// Invalid or unknown configuration keys/values.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// File I/O failures: missing files, bad magic, truncation, write errors.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace mms
