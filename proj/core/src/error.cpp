#include "favfa/error.hpp"

namespace favfa {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kSchemaInvalid: return "SchemaInvalid";
    case ErrorCode::kMissingAttribute: return "MissingAttribute";
    case ErrorCode::kUnresolvedImage: return "UnresolvedImage";
    case ErrorCode::kDegeneratePairs: return "DegeneratePairs";
    case ErrorCode::kNoGroups: return "NoGroups";
    case ErrorCode::kDegenerateSupport: return "DegenerateSupport";
    case ErrorCode::kEmptySubset: return "EmptySubset";
    case ErrorCode::kConstantColumn: return "ConstantColumn";
    case ErrorCode::kQuasiSeparation: return "QuasiSeparation";
    case ErrorCode::kSingularInformation: return "SingularInformation";
    case ErrorCode::kNotConverged: return "NotConverged";
    case ErrorCode::kRankDeficient: return "RankDeficient";
    case ErrorCode::kInsufficientCandidates: return "InsufficientCandidates";
    case ErrorCode::kNotDivisible: return "NotDivisible";
    case ErrorCode::kInsufficientStyles: return "InsufficientStyles";
    case ErrorCode::kPreconditionViolation: return "PreconditionViolation";
  }
  return "Unknown";
}

}  // namespace favfa
