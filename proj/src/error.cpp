#include "marketclear/error.hpp"

namespace marketclear {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kStructure: return "structure";
    case ErrorCode::kDomain: return "domain";
    case ErrorCode::kMalformedDocument: return "malformed-document";
    case ErrorCode::kNestsNotDisjoint: return "nests-not-disjoint";
    case ErrorCode::kNestsNotCovering: return "nests-not-covering";
    case ErrorCode::kMuOutOfRange: return "mu-out-of-range";
    case ErrorCode::kNonPositiveGamma: return "non-positive-gamma";
    case ErrorCode::kBoundsInverted: return "bounds-inverted";
    case ErrorCode::kNotProductive: return "not-productive";
    case ErrorCode::kDiverged: return "diverged";
    case ErrorCode::kStepTooLarge: return "step-too-large";
    case ErrorCode::kInsufficientData: return "insufficient-data";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

}  // namespace marketclear
