#include "cosmos/error.hpp"

namespace cosmos {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::CapacityMismatch: return "CapacityMismatch";
    case ErrorCode::ConstraintViolation: return "ConstraintViolation";
    case ErrorCode::NonPositiveDimension: return "NonPositiveDimension";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::Misaligned: return "Misaligned";
    case ErrorCode::LevelOutOfRange: return "LevelOutOfRange";
    case ErrorCode::RatioOutOfRange: return "RatioOutOfRange";
    case ErrorCode::NonPositivePower: return "NonPositivePower";
    case ErrorCode::MissingTarget: return "MissingTarget";
    case ErrorCode::MultipleTargets: return "MultipleTargets";
    case ErrorCode::NonPositiveInput: return "NonPositiveInput";
    case ErrorCode::UnknownCommand: return "UnknownCommand";
    case ErrorCode::QueueFull: return "QueueFull";
    case ErrorCode::WindowFull: return "WindowFull";
    case ErrorCode::HoldingBufferFull: return "HoldingBufferFull";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::TraceMismatch: return "TraceMismatch";
  }
  return "Unknown";
}

}  // namespace cosmos
