#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace needle_iso {

enum class ErrorCode {
  InvalidInterval,
  InvalidDensity,
  ZeroMass,
  OutOfDomain,
  InvalidOrder,
  PreconditionFailed,
  NonIntegerPower,
  InvalidMass,
  HypothesisViolated,
  NotApplicable,
  RetryExhausted,
  InvalidArgument,
  UnknownSpace,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInterval: return "InvalidInterval";
    case ErrorCode::InvalidDensity: return "InvalidDensity";
    case ErrorCode::ZeroMass: return "ZeroMass";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::InvalidOrder: return "InvalidOrder";
    case ErrorCode::PreconditionFailed: return "PreconditionFailed";
    case ErrorCode::NonIntegerPower: return "NonIntegerPower";
    case ErrorCode::InvalidMass: return "InvalidMass";
    case ErrorCode::HypothesisViolated: return "HypothesisViolated";
    case ErrorCode::NotApplicable: return "NotApplicable";
    case ErrorCode::RetryExhausted: return "RetryExhausted";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::UnknownSpace: return "UnknownSpace";
  }
  return "Unknown";
}

/// Domain error raised by every library operation. The code identifies the
/// failed contract; what() carries a human-readable message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace needle_iso
