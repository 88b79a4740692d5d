#pragma once

#include <stdexcept>
#include <string>

namespace ergocert {

enum class ErrorCode {
    // kernel
    NotSquare,
    NegativeEntry,
    RowSumOutOfTolerance,
    DuplicateLabel,
    SpaceMismatch,
    NotIrreducible,
    SolverSingular,
    // ergodicity
    NonConvergence,
    HorizonTooSmall,
    NoGeometricDecay,
    InvalidOverride,
    // hitting
    UOutOfRange,
    EmptyRange,
    GridTooSmall,
    // functionals
    LengthMismatch,
    TooLargeToEnumerate,
    // exact / diagnostics
    BudgetExceeded,
    HorizonMismatch,
    IndexOutOfRange,
    StartNotInC,
    // cli
    UnknownZooEntry,
    ParseError,
    // generic argument-range violation
    DomainError,
    // a cross-check between two internal computation routes disagreed
    InternalError,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void throw_error(ErrorCode code, const std::string& what) {
    throw Error(code, what);
}

} // namespace ergocert
