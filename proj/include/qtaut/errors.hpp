#pragma once

#include <stdexcept>
#include <string>

namespace qtaut {

// Malformed or out-of-contract input. The CLI maps this to exit code 1.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DimensionError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

// A result that contradicts a proven structural fact (exit code 2).
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// An enumeration would exceed its configured budget (exit code 3).
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qtaut
