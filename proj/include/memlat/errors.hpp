#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace memlat {

enum class ErrorCode {
  NonPositiveInput,
  TrapFrequencyImaginary,
  ReflectivityZero,
  NotHurwitz,
  StepTooLarge,
  CapExceeded,
  DegenerateKernel,
  TruncationLeak,
  EquivalenceFailed,
  ZeroCoolRate,
  ParseError,
  InvalidInput,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the library; callers dispatch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace memlat
