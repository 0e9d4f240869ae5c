#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace clopa {

enum class ErrorCode {
  ProbabilityRange,
  RateRange,
  TmelNonpositive,
  DuplicateEventName,
  UnresolvedLeaf,
  CycleDetected,
  TooManyEvents,
  DegenerateDenominator,
  InfeasiblePoint,
  RrfBelowMinimum,
  Degenerate,
  DegenerateCoefficients,
  PasOutOfRange,
  DegenerateConfig,
  ParseError,
  SchemaError,
  ValidationError,
  IoError,
};

/// Stable machine-readable name, e.g. "TMEL_NONPOSITIVE".
constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ProbabilityRange: return "PROBABILITY_RANGE";
    case ErrorCode::RateRange: return "RATE_RANGE";
    case ErrorCode::TmelNonpositive: return "TMEL_NONPOSITIVE";
    case ErrorCode::DuplicateEventName: return "DUPLICATE_EVENT_NAME";
    case ErrorCode::UnresolvedLeaf: return "UNRESOLVED_LEAF";
    case ErrorCode::CycleDetected: return "CYCLE_DETECTED";
    case ErrorCode::TooManyEvents: return "TOO_MANY_EVENTS";
    case ErrorCode::DegenerateDenominator: return "DEGENERATE_DENOMINATOR";
    case ErrorCode::InfeasiblePoint: return "INFEASIBLE_POINT";
    case ErrorCode::RrfBelowMinimum: return "RRF_BELOW_MINIMUM";
    case ErrorCode::Degenerate: return "DEGENERATE";
    case ErrorCode::DegenerateCoefficients: return "DEGENERATE_COEFFICIENTS";
    case ErrorCode::PasOutOfRange: return "PAS_OUT_OF_RANGE";
    case ErrorCode::DegenerateConfig: return "DEGENERATE_CONFIG";
    case ErrorCode::ParseError: return "PARSE_ERROR";
    case ErrorCode::SchemaError: return "SCHEMA_ERROR";
    case ErrorCode::ValidationError: return "VALIDATION_ERROR";
    case ErrorCode::IoError: return "IO_ERROR";
  }
  return "UNKNOWN";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace clopa
