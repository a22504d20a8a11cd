#pragma once

#include <stdexcept>
#include <string>

namespace kraftlab {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input (files, schemas, dangling references).
struct ParseError : Error {
  using Error::Error;
};

/// Violated precondition or out-of-range argument.
struct DomainError : Error {
  using Error::Error;
};

/// An enumeration or bit-size budget was exhausted before completion.
struct BudgetExceeded : Error {
  using Error::Error;
};

}  // namespace kraftlab
