#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ndg {

enum class ErrorCode {
  EmptyInput,
  NonFiniteValue,
  TiesInX,
  TiesInY,
  SampleTooSmall,
  DegenerateRanks,
  MalformedRectangle,
  UnknownSpecName,
  BadParams,
  TooManyPoints,
  ParseError,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::TiesInX: return "TiesInX";
    case ErrorCode::TiesInY: return "TiesInY";
    case ErrorCode::SampleTooSmall: return "SampleTooSmall";
    case ErrorCode::DegenerateRanks: return "DegenerateRanks";
    case ErrorCode::MalformedRectangle: return "MalformedRectangle";
    case ErrorCode::UnknownSpecName: return "UnknownSpecName";
    case ErrorCode::BadParams: return "BadParams";
    case ErrorCode::TooManyPoints: return "TooManyPoints";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ndg
