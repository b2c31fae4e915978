#pragma once

#include <stdexcept>
#include <string>

namespace andreev {

enum class ErrorCode {
  NonIntersecting,
  DegenerateTriple,
  NotSpacelike,
  IllegalMove,
  NotSimple,
  InternalInvariantViolation,
  BadN,
  MissingEdgeAngle,
  EndpointOutsidePolytope,
  NotTruncatedClass,
  AngleTooFarFromPiOver3,
  SingularJacobian,
  MaxIterExceeded,
  DivergedResidual,
  HomotopyStuck,
  WhiteheadBasinMiss,
  VertexNeverCrossed,
  GlueMismatch,
  BadAngles,
  BadAngleRange,
  NonCompact,
  NotSubmultiple,
  ConditionsFailed,
  VerificationFailed,
  ParseError,
  SemanticError,
  IoError,
};

const char* error_name(ErrorCode code);

// Parse/semantic errors are input problems; everything numerical is a
// pipeline failure. The CLI maps the two groups to different exit codes.
bool is_input_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace andreev
