#include "ghostfem/error.hpp"

namespace ghostfem {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::AmbiguousCut: return "AmbiguousCut";
    case ErrorCode::DegeneratePolygon: return "DegeneratePolygon";
    case ErrorCode::ZeroLengthSegment: return "ZeroLengthSegment";
    case ErrorCode::DegreeTooHigh: return "DegreeTooHigh";
    case ErrorCode::InvalidTheta: return "InvalidTheta";
    case ErrorCode::CompatibilityViolation: return "CompatibilityViolation";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NonPositive: return "NonPositive";
    case ErrorCode::EmptySampleSet: return "EmptySampleSet";
    case ErrorCode::InsufficientData: return "InsufficientData";
  }
  return "Unknown";
}

}  // namespace ghostfem
