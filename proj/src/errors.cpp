#include "memlat/errors.hpp"

namespace memlat {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPositiveInput: return "NonPositiveInput";
    case ErrorCode::TrapFrequencyImaginary: return "TrapFrequencyImaginary";
    case ErrorCode::ReflectivityZero: return "ReflectivityZero";
    case ErrorCode::NotHurwitz: return "NotHurwitz";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::CapExceeded: return "CapExceeded";
    case ErrorCode::DegenerateKernel: return "DegenerateKernel";
    case ErrorCode::TruncationLeak: return "TruncationLeak";
    case ErrorCode::EquivalenceFailed: return "EquivalenceFailed";
    case ErrorCode::ZeroCoolRate: return "ZeroCoolRate";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code) {}

}  // namespace memlat
