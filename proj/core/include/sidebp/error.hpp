#pragma once

#include <stdexcept>
#include <string>

namespace sidebp {

/// Raised when caller-supplied parameters or inputs violate a precondition.
/// The CLI maps this to exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure failed to produce a trustworthy answer
/// (e.g. density evolution left its a-priori bound).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sidebp
