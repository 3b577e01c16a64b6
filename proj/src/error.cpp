#include "ringflow/error.hpp"

namespace ringflow {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DegenerateFiber: return "DegenerateFiber";
    case ErrorCode::BoundaryTarget: return "BoundaryTarget";
    case ErrorCode::SingularMatrix: return "SingularW";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::StepUnderflow: return "StepUnderflow";
    case ErrorCode::MaxSteps: return "MaxSteps";
    case ErrorCode::Timeout: return "Timeout";
    case ErrorCode::StateEscape: return "StateEscape";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

bool is_numerical(ErrorCode code) {
  switch (code) {
    case ErrorCode::SingularMatrix:
    case ErrorCode::NoConvergence:
    case ErrorCode::StepUnderflow:
    case ErrorCode::MaxSteps:
    case ErrorCode::Timeout:
    case ErrorCode::StateEscape:
      return true;
    default:
      return false;
  }
}

}  // namespace ringflow
