#include "thermobeam/error.hpp"

namespace thermobeam {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::NonPositiveAlpha: return "NonPositiveAlpha";
    case ErrorCode::DivisionDomain: return "DivisionDomain";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::BadMesh: return "BadMesh";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::SolveFailure: return "SolveFailure";
    case ErrorCode::MissingPrev: return "MissingPrev";
    case ErrorCode::DegenerateSeries: return "DegenerateSeries";
    case ErrorCode::UnsupportedVariant: return "UnsupportedVariant";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
    }
    return "UnknownError";
}

} // namespace thermobeam
