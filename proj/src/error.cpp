#include "ses/error.hpp"

namespace ses {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonFiniteEnergy: return "NonFiniteEnergy";
    case ErrorCode::NonPositiveDegeneracy: return "NonPositiveDegeneracy";
    case ErrorCode::TruncationTooCoarse: return "TruncationTooCoarse";
    case ErrorCode::CutoffBelowGround: return "CutoffBelowGround";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::NegativeProbability: return "NegativeProbability";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::NegativeBetaUnbounded: return "NegativeBetaUnbounded";
    case ErrorCode::EnergyOutOfRange: return "EnergyOutOfRange";
    case ErrorCode::EntropyOutOfRange: return "EntropyOutOfRange";
    case ErrorCode::BranchUnavailable: return "BranchUnavailable";
    case ErrorCode::OperatingBoxExceeded: return "OperatingBoxExceeded";
    case ErrorCode::AmountOutOfRange: return "AmountOutOfRange";
    case ErrorCode::KindFieldMissing: return "KindFieldMissing";
    case ErrorCode::KindMismatch: return "KindMismatch";
    case ErrorCode::TemperatureOrder: return "TemperatureOrder";
    case ErrorCode::TemperatureSign: return "TemperatureSign";
    case ErrorCode::ZeroTemperature: return "ZeroTemperature";
    case ErrorCode::NonPositiveTemperature: return "NonPositiveTemperature";
    case ErrorCode::IndivisibleScenario: return "IndivisibleScenario";
    case ErrorCode::NegativeBranchUnavailable: return "NegativeBranchUnavailable";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "UnknownError";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_name(code)) + ": " + message), code_(code) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace ses
