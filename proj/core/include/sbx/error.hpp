#pragma once

#include <stdexcept>
#include <string>

namespace sbx {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A scalar argument lies outside its admissible range.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed or unreadable file, config or model.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace sbx
