#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cosmos {

enum class ErrorCode {
  CapacityMismatch,
  ConstraintViolation,
  NonPositiveDimension,
  OutOfRange,
  Misaligned,
  LevelOutOfRange,
  RatioOutOfRange,
  NonPositivePower,
  MissingTarget,
  MultipleTargets,
  NonPositiveInput,
  UnknownCommand,
  QueueFull,
  WindowFull,
  HoldingBufferFull,
  ParseError,
  ConfigError,
  TraceMismatch,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + message), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace cosmos
