#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace stratmorse {

enum class ErrorCode {
  InvalidSimplex,
  UnknownCell,
  NotAMatching,
  ClosedPathExists,
  NotADmf,
  MissingValue,
  Disconnected,
  RootMissing,
  NoPath,
  MultiplePaths,
  NotPrime,
  InvalidSpec,
  NegativePrediction,
  CircleTooShort,
  InconsistentStructure,
  ParseError,
  ValidationError,
  DualNotTree,
  RepairFailed,
  MismatchedSpec,
  InvariantViolation,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace stratmorse
