#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace soliton {

enum class ErrorCode {
  DivisionByZero,
  ParseError,
  ZeroDenominator,
  WindowTooSmall,
  NonPositiveParameter,
  ParamOutOfRange,
  InvalidInterval,
  POutOfRange,
  GammaSignCondition,
  DegenerateP,
  DenominatorClash,
  DuplicateP,
  ZeroTau,
  ConstraintViolated,
  CapacityViolation,
  NonPositiveEpsilon,
  EmptyField,
  TooFewSamples,
  InconsistentCapacities,
  WrongTrackCount,
};

const char* to_string(ErrorCode code);

/// Library error. `site` carries the lattice site or soliton index when the
/// failure can be pinned to one; `other` the second index of a pairwise clash.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<long> site = std::nullopt,
        std::optional<long> other = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  std::optional<long> site() const noexcept { return site_; }
  std::optional<long> other() const noexcept { return other_; }

 private:
  ErrorCode code_;
  std::optional<long> site_;
  std::optional<long> other_;
};

}  // namespace soliton
