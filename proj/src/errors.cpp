// SPDX-License-Identifier: Apache-2.0

#include "apfree/errors.hpp"

namespace apfree {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NotPrimePower: return "NotPrimePower";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::CharTooSmall: return "CharTooSmall";
    case ErrorKind::AmbientMismatch: return "AmbientMismatch";
    case ErrorKind::EmptyHypergraph: return "EmptyHypergraph";
    case ErrorKind::SizeLimit: return "SizeLimit";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::RangeError: return "RangeError";
    case ErrorKind::PreconditionFailed: return "PreconditionFailed";
    case ErrorKind::QTooSmall: return "QTooSmall";
    case ErrorKind::TooSmall: return "TooSmall";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::BudgetExhausted: return "BudgetExhausted";
    case ErrorKind::DegenerateShell: return "DegenerateShell";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::InvariantViolation: return "InvariantViolation";
  }
  return "Unknown";
}

}  // namespace apfree
