#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace friable {

enum class ErrorCode {
  NotInvertible,
  NotCoprime,
  Overflow,
  OutOfRange,
  ModulusTooLarge,
  CapExceeded,
  WorkCapExceeded,
  BudgetExceeded,
  TableTooSmall,
  ResidueNotCoprime,
  MemoryCap,
  QuadratureFailure,
  FormatError,
  IoError,
  InvariantViolation,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotInvertible: return "NotInvertible";
    case ErrorCode::NotCoprime: return "NotCoprime";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::ModulusTooLarge: return "ModulusTooLarge";
    case ErrorCode::CapExceeded: return "CapExceeded";
    case ErrorCode::WorkCapExceeded: return "WorkCapExceeded";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::TableTooSmall: return "TableTooSmall";
    case ErrorCode::ResidueNotCoprime: return "ResidueNotCoprime";
    case ErrorCode::MemoryCap: return "MemoryCap";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::FormatError: return "FormatError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace friable
