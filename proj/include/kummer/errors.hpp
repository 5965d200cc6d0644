#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace kummer {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Evaluation left the function's domain: division by a value that may be
/// zero, ln of a non-positive value, factorial of a non-integer.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An exact computation outgrew the configured size budget.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// A precondition on an argument does not hold.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

class PositivityViolation : public Error {
 public:
  explicit PositivityViolation(std::int64_t index)
      : Error("term a_" + std::to_string(index) + " is not positive"), index_(index) {}
  std::int64_t index() const { return index_; }

 private:
  std::int64_t index_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t offset, std::string expected, const std::string& message)
      : Error(message), offset_(offset), expected_(std::move(expected)) {}
  std::size_t offset() const { return offset_; }
  const std::string& expected() const { return expected_; }

 private:
  std::size_t offset_;
  std::string expected_;
};

}  // namespace kummer
