#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace fbounds {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input or out-of-range parameter.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// A size guard (arity cap, enumeration budget, distinct-constraint count) was exceeded.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// The constraint function has no satisfying assignment, or is otherwise unusable.
class DegenerateFunctionError : public Error {
 public:
  using Error::Error;
};

/// c = 0: every weight supported on the solution set has first-order Fourier mass.
class NoSymmetrizableWeightError : public DegenerateFunctionError {
 public:
  using DegenerateFunctionError::DegenerateFunctionError;
};

/// The B-matrix route needs linearly independent rows of A; use compute_c instead.
class RankDeficiencyError : public Error {
 public:
  using Error::Error;
};

/// The family has no exact closed-form reference bound.
class NoClosedFormError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class ParseError : public ArgumentError {
 public:
  ParseError(std::size_t position, std::string expected, const std::string& detail)
      : ArgumentError(detail + " at position " + std::to_string(position) + " (expected " +
                      expected + ")"),
        position_(position),
        expected_(std::move(expected)) {}

  std::size_t position() const noexcept { return position_; }
  const std::string& expected() const noexcept { return expected_; }

 private:
  std::size_t position_;
  std::string expected_;
};

}  // namespace fbounds
