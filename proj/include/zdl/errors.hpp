#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace zdl {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller-supplied value violates an operation's precondition.
/// The CLI maps this family to exit status 2.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// A divisor table is too short for the requested argument.
class TableUnderflow : public ParameterError {
 public:
  explicit TableUnderflow(std::uint64_t required)
      : ParameterError("table underflow: divisor table limit must be at least " +
                       std::to_string(required)),
        required_(required) {}

  std::uint64_t required_limit() const noexcept { return required_; }

 private:
  std::uint64_t required_;
};

/// Sampled data does not cover the interval an integral needs.
class CoverageError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

/// Argument outside the mathematical domain of a formula.
class DomainError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

/// Requested size exceeds a configured cap or memory budget.
class SizingError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

/// Cache file missing, truncated or failing validation.
class CacheError : public Error {
 public:
  using Error::Error;
};

/// Computed data violates an invariant (signals a numerical bug).
class DataError : public Error {
 public:
  using Error::Error;
};

}  // namespace zdl
