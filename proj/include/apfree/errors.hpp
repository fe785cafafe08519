// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace apfree {

enum class ErrorKind {
  InvalidArgument,
  NotPrimePower,
  Overflow,
  CharTooSmall,
  AmbientMismatch,
  EmptyHypergraph,
  SizeLimit,
  DomainError,
  RangeError,
  PreconditionFailed,
  QTooSmall,
  TooSmall,
  TooLarge,
  BudgetExhausted,
  DegenerateShell,
  ParseError,
  InvariantViolation,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library. The kind drives CLI exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

inline void require(bool condition, ErrorKind kind, std::string_view message) {
  if (!condition) fail(kind, std::string(message));
}

}  // namespace apfree
