#include "warpite/errors.hpp"

namespace warpite {

const char* error_kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidInput: return "InvalidInput";
        case ErrorKind::MismatchedBoundary: return "MismatchedBoundary";
        case ErrorKind::AssumptionViolation: return "AssumptionViolation";
        case ErrorKind::AmbiguousCase: return "AmbiguousCase";
        case ErrorKind::PoleProximity: return "PoleProximity";
        case ErrorKind::IntegrationFailure: return "IntegrationFailure";
        case ErrorKind::BracketExhaustion: return "BracketExhaustion";
        case ErrorKind::NotAnEigenvalue: return "NotAnEigenvalue";
        case ErrorKind::TruncationUncertified: return "TruncationUncertified";
        case ErrorKind::RootRefinementFailure: return "RootRefinementFailure";
        case ErrorKind::PoleSpacing: return "PoleSpacing";
        case ErrorKind::NonPolynomialRhs: return "NonPolynomialRhs";
        case ErrorKind::UnsupportedOrder: return "UnsupportedOrder";
        case ErrorKind::CancellationBeyondOrder: return "CancellationBeyondOrder";
        case ErrorKind::BranchOnCut: return "BranchOnCut";
        case ErrorKind::EllipticRegimeViolation: return "EllipticRegimeViolation";
        case ErrorKind::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

}  // namespace warpite
