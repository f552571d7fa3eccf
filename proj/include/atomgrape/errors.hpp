#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace atomgrape {

// Bad argument or violated invariant. The CLI maps this family to exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NotFoundError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ParseError : public ValidationError {
 public:
  ParseError(const std::string& what, std::size_t line)
      : ValidationError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Numerical breakdown (NaN objective, undefined phase). CLI exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UndefinedPhaseError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace atomgrape
