#pragma once

#include <cmath>
#include <optional>

#include "memlat/errors.hpp"

namespace memlat::test {

inline double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

/// Error code thrown by f, or nullopt when f returns normally.
template <typename F>
std::optional<ErrorCode> error_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

}  // namespace memlat::test
