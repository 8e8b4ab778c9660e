#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace logconnect {

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  NonConvergence,
  Overflow,
  SingularMatrix,
  ResonantSpectrum,
  NonConstantResidue,
  UnsupportedBranch,
  ResonantResidue,
  NonIntegrable,
  DegenerateConfiguration,
  PoleProximity,
  ToleranceNotMet,
  NotProjectivelyCommuting,
  NonDiagonalizableFamily,
  OrderOverflow,
  NonAbelianUnsupported,
  SchemaViolation,
};

constexpr std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::Overflow: return "OverflowError";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::ResonantSpectrum: return "ResonantSpectrum";
    case ErrorCode::NonConstantResidue: return "NonConstantResidue";
    case ErrorCode::UnsupportedBranch: return "UnsupportedBranch";
    case ErrorCode::ResonantResidue: return "ResonantResidue";
    case ErrorCode::NonIntegrable: return "NonIntegrable";
    case ErrorCode::DegenerateConfiguration: return "DegenerateConfiguration";
    case ErrorCode::PoleProximity: return "PoleProximity";
    case ErrorCode::ToleranceNotMet: return "ToleranceNotMet";
    case ErrorCode::NotProjectivelyCommuting: return "NotProjectivelyCommuting";
    case ErrorCode::NonDiagonalizableFamily: return "NonDiagonalizableFamily";
    case ErrorCode::OrderOverflow: return "OrderOverflow";
    case ErrorCode::NonAbelianUnsupported: return "NonAbelianUnsupported";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the typed codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Schema failures additionally carry a JSON pointer to the offending field.
class SchemaError : public Error {
 public:
  SchemaError(std::string pointer, const std::string& what)
      : Error(ErrorCode::SchemaViolation, pointer + ": " + what), pointer_(std::move(pointer)) {}

  const std::string& pointer() const noexcept { return pointer_; }

 private:
  std::string pointer_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace logconnect
