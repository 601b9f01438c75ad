#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace icdof {

/// Machine-readable category carried by every library error.
enum class ErrorCode {
  parse_error,
  invalid_argument,
  budget_exceeded,
  condition_violated,
  degenerate,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::parse_error: return "parse_error";
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::budget_exceeded: return "budget_exceeded";
    case ErrorCode::condition_violated: return "condition_violated";
    case ErrorCode::degenerate: return "degenerate";
  }
  return "unknown";
}

/// Input-validation failure. Everything thrown as `Error` is the caller's
/// fault (bad syntax, violated precondition, exhausted budget); any other
/// exception escaping the library is a bug.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace icdof
