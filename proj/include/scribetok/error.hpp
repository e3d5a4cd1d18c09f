#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace scribetok {

enum class ErrorCode {
  InvalidInk,
  Overflow,
  InvalidParams,
  InvalidToken,
  BudgetExhausted,
  ParseError,
  ConfigMismatch,
  EmptyInk,
  IoError,
};

constexpr std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInk: return "InvalidInk";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::InvalidToken: return "InvalidToken";
    case ErrorCode::BudgetExhausted: return "BudgetExhausted";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ConfigMismatch: return "ConfigMismatch";
    case ErrorCode::EmptyInk: return "EmptyInk";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so
/// front ends can report a stable, machine-parsable name.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace scribetok
