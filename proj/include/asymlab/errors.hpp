#pragma once

#include <stdexcept>
#include <string>

namespace asymlab {

// Every failure mode of the library carries one of these codes.  The CLI maps
// "rejection" codes (bad input, violated hypothesis) to exit status 2 and
// everything else (a bug or a broken internal guarantee) to exit status 1, so
// scripted sweeps can count mathematical rejections separately from crashes.
enum class ErrorCode {
    NotHermitian,
    NoConvergence,
    SingularPositiveOperator,
    EigenFailure,
    NotUpperTriangularInSplit,
    SingularBlock,
    NotAContraction,
    NotPowerBounded,
    Overflow,
    KernelValidationFailed,
    InvarianceViolation,
    NotUnitary,
    ClassC0dot,
    IllConditioned,
    HypothesisViolation,
    EmptyWindow,
    ConditionIIIViolated,
    BoundViolated,
    PowerBoundednessViolated,
    SchemaError,
    ToleranceConflict,
    InvalidArgument,
};

inline const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::NotHermitian: return "NotHermitian";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::SingularPositiveOperator: return "SingularPositiveOperator";
        case ErrorCode::EigenFailure: return "EigenFailure";
        case ErrorCode::NotUpperTriangularInSplit: return "NotUpperTriangularInSplit";
        case ErrorCode::SingularBlock: return "SingularBlock";
        case ErrorCode::NotAContraction: return "NotAContraction";
        case ErrorCode::NotPowerBounded: return "NotPowerBounded";
        case ErrorCode::Overflow: return "Overflow";
        case ErrorCode::KernelValidationFailed: return "KernelValidationFailed";
        case ErrorCode::InvarianceViolation: return "InvarianceViolation";
        case ErrorCode::NotUnitary: return "NotUnitary";
        case ErrorCode::ClassC0dot: return "ClassC0dot";
        case ErrorCode::IllConditioned: return "IllConditioned";
        case ErrorCode::HypothesisViolation: return "HypothesisViolation";
        case ErrorCode::EmptyWindow: return "EmptyWindow";
        case ErrorCode::ConditionIIIViolated: return "ConditionIIIViolated";
        case ErrorCode::BoundViolated: return "BoundViolated";
        case ErrorCode::PowerBoundednessViolated: return "PowerBoundednessViolated";
        case ErrorCode::SchemaError: return "SchemaError";
        case ErrorCode::ToleranceConflict: return "ToleranceConflict";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "UnknownError";
}

// Rejections are expected outcomes on valid runs of the tool: the input fails
// a mathematical hypothesis or does not parse.  Non-rejections indicate a
// violated internal invariant and should never happen on healthy builds.
inline bool is_rejection(ErrorCode code) {
    switch (code) {
        case ErrorCode::NotHermitian:
        case ErrorCode::SingularPositiveOperator:
        case ErrorCode::NotAContraction:
        case ErrorCode::NotPowerBounded:
        case ErrorCode::Overflow:
        case ErrorCode::NotUnitary:
        case ErrorCode::ClassC0dot:
        case ErrorCode::HypothesisViolation:
        case ErrorCode::EmptyWindow:
        case ErrorCode::PowerBoundednessViolated:
        case ErrorCode::SchemaError:
        case ErrorCode::ToleranceConflict:
        case ErrorCode::InvalidArgument:
        case ErrorCode::NotUpperTriangularInSplit:
        case ErrorCode::IllConditioned:
            return true;
        default:
            return false;
    }
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

} // namespace asymlab
