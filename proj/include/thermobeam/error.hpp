/**
 * @file error.hpp
 * @brief Error type shared by all thermobeam modules.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace thermobeam {

enum class ErrorCode {
    NonPositiveAlpha,
    DivisionDomain,
    ValidationError,
    BadMesh,
    DimensionMismatch,
    SingularSystem,
    SolveFailure,
    MissingPrev,
    DegenerateSeries,
    UnsupportedVariant,
    GridMismatch,
    ParseError,
    IoError,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace thermobeam
