#include "error.hpp"

namespace varfrac {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::Io: return "IoError";
    case ErrorCode::Parse: return "ParseError";
    case ErrorCode::Validation: return "ValidationError";
    case ErrorCode::Evaluation: return "EvaluationError";
    case ErrorCode::Hypothesis: return "HypothesisFailure";
    case ErrorCode::Inadmissible: return "InadmissibleParameters";
    case ErrorCode::BracketFailure: return "BracketFailure";
    case ErrorCode::GradingOverflow: return "GradingOverflow";
    case ErrorCode::EmptyZeroSet: return "EmptyZeroSet";
    case ErrorCode::DegenerateDictionary: return "DegenerateDictionary";
    case ErrorCode::EscapeFailure: return "EscapeFailure";
    case ErrorCode::PathCollapse: return "PathCollapse";
    case ErrorCode::BoundaryTrap: return "BoundaryTrap";
    case ErrorCode::SearchExhausted: return "SearchExhausted";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::Argument: return "ArgumentError";
    }
    return "UnknownError";
}

} // namespace varfrac
