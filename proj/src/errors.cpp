#include "metachain/errors.hpp"

namespace metachain {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse: return "ParseError";
    case ErrorCode::kInvalidModel: return "InvalidModel";
    case ErrorCode::kEmptyScaleBasis: return "EmptyScaleBasis";
    case ErrorCode::kUnknownState: return "UnknownState";
    case ErrorCode::kNotIrreducible: return "NotIrreducible";
    case ErrorCode::kAsymmetricSupport: return "AsymmetricSupport";
    case ErrorCode::kNotReversible: return "NotReversible";
    case ErrorCode::kStateNotKept: return "StateNotKept";
    case ErrorCode::kTooFewStates: return "TooFewStates";
    case ErrorCode::kEmptySubset: return "EmptySubset";
    case ErrorCode::kFullSet: return "FullSet";
    case ErrorCode::kOverlappingSets: return "OverlappingSets";
    case ErrorCode::kDisconnected: return "Disconnected";
    case ErrorCode::kHarmonicInconsistency: return "HarmonicInconsistency";
    case ErrorCode::kDepthNotDiverging: return "DepthNotDiverging";
    case ErrorCode::kStartDependentHitting: return "StartDependentHitting";
    case ErrorCode::kCrossCheckMismatch: return "CrossCheckMismatch";
    case ErrorCode::kInternal: return "InternalError";
    case ErrorCode::kStateSpaceTooLarge: return "StateSpaceTooLarge";
    case ErrorCode::kInvalidField: return "InvalidField";
    case ErrorCode::kNotInOmegaO: return "NotInOmegaO";
    case ErrorCode::kNotApplicable: return "NotApplicable";
    case ErrorCode::kNonPositiveRate: return "NonPositiveRate";
    case ErrorCode::kUnderflow: return "Underflow";
    case ErrorCode::kIo: return "IoError";
  }
  return "Unknown";
}

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse:
    case ErrorCode::kInvalidModel:
    case ErrorCode::kEmptyScaleBasis:
    case ErrorCode::kUnknownState:
    case ErrorCode::kNotIrreducible:
    case ErrorCode::kAsymmetricSupport:
    case ErrorCode::kNotReversible:
    case ErrorCode::kInvalidField:
    case ErrorCode::kStateSpaceTooLarge:
    case ErrorCode::kNonPositiveRate:
    case ErrorCode::kUnderflow:
      return 2;
    case ErrorCode::kHarmonicInconsistency:
    case ErrorCode::kDepthNotDiverging:
    case ErrorCode::kStartDependentHitting:
    case ErrorCode::kCrossCheckMismatch:
    case ErrorCode::kInternal:
      return 3;
    default:
      return 1;
  }
}

}  // namespace metachain
