#include "phistat/error.hpp"

namespace phistat {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::RangeError: return "RangeError";
    case ErrorCode::QuadratureError: return "QuadratureError";
    case ErrorCode::ConvergenceError: return "ConvergenceError";
    case ErrorCode::InvalidSimplexPoint: return "InvalidSimplexPoint";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InfeasibleConstraint: return "InfeasibleConstraint";
    case ErrorCode::DivergentIntegral: return "DivergentIntegral";
    case ErrorCode::NoPositiveRoot: return "NoPositiveRoot";
    case ErrorCode::VerificationFailure: return "VerificationFailure";
    case ErrorCode::UnsupportedOutcome: return "UnsupportedOutcome";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "UnknownError";
}

void fail(ErrorCode code, const std::string& what) {
    throw Error(code, std::string(to_string(code)) + ": " + what);
}

} // namespace phistat
