#pragma once

#include <stdexcept>
#include <string>

namespace ftlab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Incompatible tensor shapes or mismatched key sets.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// NaN or Inf encountered anywhere in the numeric pipeline.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Out-of-range argument or violated precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent configuration document.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace ftlab
