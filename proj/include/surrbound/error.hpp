#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace surrbound {

/// Failure categories raised by the library. The CLI maps these onto exit codes.
enum class ErrorCode {
  NotAProbability,
  NotNormalized,
  InvalidTable,
  BadGamma,
  WrongScale,
  BadRange,
  InfeasibleInputs,
  NumericalBreakdown,
  DegenerateDenominator,
  ZeroControlRisk,
  TooManyCombinations,
  EmptyPolyhedron,
  PremiseViolated,
  FileError,
  EmptyFile,
  BadHeader,
  MalformedRow,
  AllReplicatesInfeasible,
  DegenerateArm,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace surrbound
