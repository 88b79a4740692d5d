#include "ergocert/errors.hpp"

namespace ergocert {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::NotSquare: return "NotSquare";
        case ErrorCode::NegativeEntry: return "NegativeEntry";
        case ErrorCode::RowSumOutOfTolerance: return "RowSumOutOfTolerance";
        case ErrorCode::DuplicateLabel: return "DuplicateLabel";
        case ErrorCode::SpaceMismatch: return "SpaceMismatch";
        case ErrorCode::NotIrreducible: return "NotIrreducible";
        case ErrorCode::SolverSingular: return "SolverSingular";
        case ErrorCode::NonConvergence: return "NonConvergence";
        case ErrorCode::HorizonTooSmall: return "HorizonTooSmall";
        case ErrorCode::NoGeometricDecay: return "NoGeometricDecay";
        case ErrorCode::InvalidOverride: return "InvalidOverride";
        case ErrorCode::UOutOfRange: return "UOutOfRange";
        case ErrorCode::EmptyRange: return "EmptyRange";
        case ErrorCode::GridTooSmall: return "GridTooSmall";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::TooLargeToEnumerate: return "TooLargeToEnumerate";
        case ErrorCode::BudgetExceeded: return "BudgetExceeded";
        case ErrorCode::HorizonMismatch: return "HorizonMismatch";
        case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorCode::StartNotInC: return "StartNotInC";
        case ErrorCode::UnknownZooEntry: return "UnknownZooEntry";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::DomainError: return "DomainError";
        case ErrorCode::InternalError: return "InternalError";
    }
    return "UnknownError";
}

} // namespace ergocert
