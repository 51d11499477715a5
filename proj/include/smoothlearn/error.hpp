#pragma once

#include <stdexcept>
#include <string>

namespace smoothlearn {

enum class ErrorCode {
  invalid_argument,
  dimension_mismatch,
  non_finite,
  enumeration_too_large,
  lp_ill_conditioned,
  iteration_budget,
  undetermined,
  io,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid argument";
    case ErrorCode::dimension_mismatch: return "dimension mismatch";
    case ErrorCode::non_finite: return "non-finite value";
    case ErrorCode::enumeration_too_large: return "enumeration too large";
    case ErrorCode::lp_ill_conditioned: return "ill-conditioned";
    case ErrorCode::iteration_budget: return "iteration budget exhausted";
    case ErrorCode::undetermined: return "undetermined";
    case ErrorCode::io: return "i/o error";
  }
  return "unknown";
}

/// Error carrying a machine-readable code alongside the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace smoothlearn
