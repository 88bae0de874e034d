#pragma once

#include <stdexcept>
#include <string>

namespace vseg {

/// Base of all library errors. The CLI maps each subclass to an exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad configuration, scene spec or argument value.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Unreadable or malformed input, or an input that violates a precondition.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Two volumes/masks that must share a grid do not.
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Output could not be written.
class OutputError : public Error {
 public:
  using Error::Error;
};

}  // namespace vseg
