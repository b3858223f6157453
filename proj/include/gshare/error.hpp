#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gshare {

enum class ErrorCode {
  InvalidInput,
  NonPositiveDefinite,
  TooManyParticipants,
  EmptyGenerator,
  ThresholdOutOfRange,
  IndexOutOfRange,
  DomainError,
  NegativeRate,
  EmptyGrid,
  DegenerateVariance,
  KTooLarge,
  BudgetExceeded,
  InvalidConfig,
  NumericMismatch,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::NonPositiveDefinite: return "NonPositiveDefinite";
    case ErrorCode::TooManyParticipants: return "TooManyParticipants";
    case ErrorCode::EmptyGenerator: return "EmptyGenerator";
    case ErrorCode::ThresholdOutOfRange: return "ThresholdOutOfRange";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::NegativeRate: return "NegativeRate";
    case ErrorCode::EmptyGrid: return "EmptyGrid";
    case ErrorCode::DegenerateVariance: return "DegenerateVariance";
    case ErrorCode::KTooLarge: return "KTooLarge";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::NumericMismatch: return "NumericMismatch";
  }
  return "Unknown";
}

// Numeric failures are cross-check disagreements detected at run time; every
// other code is a rejected input.
inline bool is_numeric_failure(ErrorCode code) { return code == ErrorCode::NumericMismatch; }

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace gshare
