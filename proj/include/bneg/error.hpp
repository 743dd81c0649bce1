#pragma once

#include <stdexcept>
#include <string>

namespace bneg {

// Bad parameters: non-prime p, divisibility violations, malformed input.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A configured enumeration or expansion budget would be exceeded.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Arithmetic between elements of two different fields.
class FieldMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when an invariant guaranteed by the mathematics is violated; this
// always indicates a bug in the implementation.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace bneg
