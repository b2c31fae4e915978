#include "andreev/error.hpp"

namespace andreev {

const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonIntersecting: return "NonIntersecting";
    case ErrorCode::DegenerateTriple: return "DegenerateTriple";
    case ErrorCode::NotSpacelike: return "NotSpacelike";
    case ErrorCode::IllegalMove: return "IllegalMove";
    case ErrorCode::NotSimple: return "NotSimple";
    case ErrorCode::InternalInvariantViolation: return "InternalInvariantViolation";
    case ErrorCode::BadN: return "BadN";
    case ErrorCode::MissingEdgeAngle: return "MissingEdgeAngle";
    case ErrorCode::EndpointOutsidePolytope: return "EndpointOutsidePolytope";
    case ErrorCode::NotTruncatedClass: return "NotTruncatedClass";
    case ErrorCode::AngleTooFarFromPiOver3: return "AngleTooFarFromPiOver3";
    case ErrorCode::SingularJacobian: return "SingularJacobian";
    case ErrorCode::MaxIterExceeded: return "MaxIterExceeded";
    case ErrorCode::DivergedResidual: return "DivergedResidual";
    case ErrorCode::HomotopyStuck: return "HomotopyStuck";
    case ErrorCode::WhiteheadBasinMiss: return "WhiteheadBasinMiss";
    case ErrorCode::VertexNeverCrossed: return "VertexNeverCrossed";
    case ErrorCode::GlueMismatch: return "GlueMismatch";
    case ErrorCode::BadAngles: return "BadAngles";
    case ErrorCode::BadAngleRange: return "BadAngleRange";
    case ErrorCode::NonCompact: return "NonCompact";
    case ErrorCode::NotSubmultiple: return "NotSubmultiple";
    case ErrorCode::ConditionsFailed: return "ConditionsFailed";
    case ErrorCode::VerificationFailed: return "VerificationFailed";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::SemanticError: return "SemanticError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

bool is_input_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::SemanticError:
    case ErrorCode::MissingEdgeAngle:
    case ErrorCode::BadN:
    case ErrorCode::BadAngleRange:
    case ErrorCode::NotSubmultiple:
    case ErrorCode::NotTruncatedClass:
    case ErrorCode::AngleTooFarFromPiOver3:
    case ErrorCode::EndpointOutsidePolytope:
    case ErrorCode::ConditionsFailed:
    case ErrorCode::IoError:
      return true;
    default:
      return false;
  }
}

}  // namespace andreev
