#pragma once

#include <stdexcept>
#include <string>

namespace fluxsat {

enum class ErrorCode {
  NegativeDensity,
  BadExponent,
  NonPositiveConstant,
  InvalidGrid,
  VacuumDensity,
  EmptyProfile,
  CflViolation,
  BoundaryTouched,
  DisconnectedSupport,
  InteriorVacuum,
  SigmaOutOfRange,
  TimeBeyondBlowup,
  ZeroMass,
  GridMismatch,
  OptimizerDiverged,
  EmptySupport,
  TooFewSnapshots,
  ConfigError,
};

const char* error_code_name(ErrorCode code);

/// All library failures throw this; `code` identifies the contract that was
/// violated and `index` (when >= 0) points at the offending cell.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, long index = -1)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code),
        index_(index) {}

  ErrorCode code() const { return code_; }
  long index() const { return index_; }

 private:
  ErrorCode code_;
  long index_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message, long index = -1) {
  throw Error(code, message, index);
}

}  // namespace fluxsat
