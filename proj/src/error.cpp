#include "soliton/error.hpp"

namespace soliton {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ZeroDenominator: return "ZeroDenominator";
    case ErrorCode::WindowTooSmall: return "WindowTooSmall";
    case ErrorCode::NonPositiveParameter: return "NonPositiveParameter";
    case ErrorCode::ParamOutOfRange: return "ParamOutOfRange";
    case ErrorCode::InvalidInterval: return "InvalidInterval";
    case ErrorCode::POutOfRange: return "POutOfRange";
    case ErrorCode::GammaSignCondition: return "GammaSignCondition";
    case ErrorCode::DegenerateP: return "DegenerateP";
    case ErrorCode::DenominatorClash: return "DenominatorClash";
    case ErrorCode::DuplicateP: return "DuplicateP";
    case ErrorCode::ZeroTau: return "ZeroTau";
    case ErrorCode::ConstraintViolated: return "ConstraintViolated";
    case ErrorCode::CapacityViolation: return "CapacityViolation";
    case ErrorCode::NonPositiveEpsilon: return "NonPositiveEpsilon";
    case ErrorCode::EmptyField: return "EmptyField";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::InconsistentCapacities: return "InconsistentCapacities";
    case ErrorCode::WrongTrackCount: return "WrongTrackCount";
  }
  return "Unknown";
}

namespace {

std::string decorate(ErrorCode code, const std::string& message) {
  return std::string(to_string(code)) + ": " + message;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message,
             std::optional<long> site, std::optional<long> other)
    : std::runtime_error(decorate(code, message)),
      code_(code),
      site_(site),
      other_(other) {}

}  // namespace soliton
