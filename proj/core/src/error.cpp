#include "cat5/error.hpp"

namespace cat5 {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::Asymmetric: return "Asymmetric";
    case ErrorCode::NonzeroDiagonal: return "NonzeroDiagonal";
    case ErrorCode::ZeroOffDiagonal: return "ZeroOffDiagonal";
    case ErrorCode::NegativeDistance: return "NegativeDistance";
    case ErrorCode::TriangleViolation: return "TriangleViolation";
    case ErrorCode::NotRealizable: return "NotRealizable";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::NotMinkowski: return "NotMinkowski";
    case ErrorCode::TooManyNegativeEigenvalues: return "TooManyNegativeEigenvalues";
    case ErrorCode::DegenerateArray: return "DegenerateArray";
    case ErrorCode::NotTimelike: return "NotTimelike";
    case ErrorCode::DegenerateFacet: return "DegenerateFacet";
    case ErrorCode::StratumA0: return "StratumA0";
    case ErrorCode::EdgesNotCovered: return "EdgesNotCovered";
    case ErrorCode::ComparisonFailed: return "ComparisonFailed";
    case ErrorCode::UnknownGraph: return "UnknownGraph";
    case ErrorCode::BadDistances: return "BadDistances";
    case ErrorCode::RejectionBudgetExceeded: return "RejectionBudgetExceeded";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace cat5
