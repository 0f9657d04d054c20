#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace semilab {

enum class ErrorCode {
  DimensionMismatch,
  DimensionTooSmall,
  NotUnitVector,
  ZeroVector,
  InvalidStructure,
  InvalidArgument,
  NegativeTime,
  ConvergenceFailure,
  UnwrapAliasing,
  NoAdmissiblePrefix,
  LengthMismatch,
  UnknownScenario,
  InvalidGrid,
  IoFailure,
};

std::string_view to_string(ErrorCode code) noexcept;

// All library failures are reported through this one exception type; the
// code lets callers (the CLI in particular) map failures to exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DimensionTooSmall: return "DimensionTooSmall";
    case ErrorCode::NotUnitVector: return "NotUnitVector";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::InvalidStructure: return "InvalidStructure";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NegativeTime: return "NegativeTime";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::UnwrapAliasing: return "UnwrapAliasing";
    case ErrorCode::NoAdmissiblePrefix: return "NoAdmissiblePrefix";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::UnknownScenario: return "UnknownScenario";
    case ErrorCode::InvalidGrid: return "InvalidGrid";
    case ErrorCode::IoFailure: return "IoFailure";
  }
  return "Unknown";
}

}  // namespace semilab
