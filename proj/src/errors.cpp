#include "sylkit/errors.hpp"

namespace sylkit {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::SingularOperator: return "SingularOperator";
    case ErrorCode::Breakdown: return "Breakdown";
    case ErrorCode::NotOrthonormal: return "NotOrthonormal";
    case ErrorCode::SingularTau: return "SingularTau";
    case ErrorCode::InvalidField: return "InvalidField";
    case ErrorCode::InvalidGeometry: return "InvalidGeometry";
    case ErrorCode::ReplayMismatch: return "ReplayMismatch";
    case ErrorCode::RequiresVerification: return "RequiresVerification";
    case ErrorCode::UnknownGenerator: return "UnknownGenerator";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

}  // namespace sylkit
