#pragma once

#include <stdexcept>
#include <string>

namespace churnlab {

// Root of every exception the library throws. Each subclass maps to one
// error class of the command-line tool (see tools/churnlab.cpp).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid or missing configuration (bad layer sizes, empty dataset, unknown key).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A hyperparameter or argument outside its admissible range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Mismatched matrix/vector dimensions.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// NaN/Inf appearing in an input, a loss or a gradient.
class NumericError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Malformed file content; the message carries row/column when known.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace churnlab
