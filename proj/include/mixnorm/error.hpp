#pragma once

#include <stdexcept>
#include <string>

namespace mixnorm {

/// Raised when an argument violates an operation's documented domain
/// (bad exponent, shape mismatch, invalid parameter tuple).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an exhaustive computation would exceed its evaluation budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by the JSON readers when a document parses but does not match
/// the expected schema.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool condition, const std::string& message) {
  if (!condition) throw DomainError(message);
}

}  // namespace detail
}  // namespace mixnorm
