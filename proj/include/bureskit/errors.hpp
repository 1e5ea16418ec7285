#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bureskit {

enum class ErrorKind {
  invalid_index,
  degree_overflow,
  invalid_metric,
  degenerate_state,
  calibration_failure,
  degenerate_duality,
  pin_convention_failure,
  invalid_gram,
  pattern_mismatch,
  pole,
  stencil,
  invalid_argument,
};

inline std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_index: return "invalid-index";
    case ErrorKind::degree_overflow: return "degree-overflow";
    case ErrorKind::invalid_metric: return "invalid-metric";
    case ErrorKind::degenerate_state: return "degenerate-state";
    case ErrorKind::calibration_failure: return "calibration-failure";
    case ErrorKind::degenerate_duality: return "degenerate-duality";
    case ErrorKind::pin_convention_failure: return "pin-convention-failure";
    case ErrorKind::invalid_gram: return "invalid-gram";
    case ErrorKind::pattern_mismatch: return "pattern-mismatch";
    case ErrorKind::pole: return "pole";
    case ErrorKind::stencil: return "stencil";
    case ErrorKind::invalid_argument: return "invalid-argument";
  }
  return "unknown";
}

/// Single exception type for the library; `kind()` tells callers which
/// contract was violated.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace bureskit
