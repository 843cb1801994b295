#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ses {

enum class ErrorCode {
  NonFiniteEnergy,
  NonPositiveDegeneracy,
  TruncationTooCoarse,
  CutoffBelowGround,
  NotNormalized,
  NegativeProbability,
  LengthMismatch,
  NegativeBetaUnbounded,
  EnergyOutOfRange,
  EntropyOutOfRange,
  BranchUnavailable,
  OperatingBoxExceeded,
  AmountOutOfRange,
  KindFieldMissing,
  KindMismatch,
  TemperatureOrder,
  TemperatureSign,
  ZeroTemperature,
  NonPositiveTemperature,
  IndivisibleScenario,
  NegativeBranchUnavailable,
  InvalidArgument,
  ParseError,
};

std::string_view error_name(ErrorCode code);

// Domain error raised by every module. what() reads "<Name>: <message>".
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  std::string_view name() const { return error_name(code_); }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace ses
