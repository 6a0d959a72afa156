#pragma once

#include <stdexcept>
#include <string>

namespace dcoh {

/// Malformed descriptor or expression text.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Operands come from different fields, algebras or groups.
struct MismatchError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct DivisionByZero : std::domain_error {
  DivisionByZero() : std::domain_error("division by zero") {}
  using std::domain_error::domain_error;
};

/// The requested operation is outside the supported instances.
struct Unsupported : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Input data violates a structural precondition (not an algebra, not a cocycle, ...).
struct InvalidInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A bounded search ran out of budget before reaching a decision.
struct BudgetExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace dcoh
