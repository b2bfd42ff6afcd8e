#pragma once

#include <stdexcept>
#include <string>

namespace metachain {

enum class ErrorCode {
  kParse,
  kInvalidModel,
  kEmptyScaleBasis,
  kUnknownState,
  kNotIrreducible,
  kAsymmetricSupport,
  kNotReversible,
  kStateNotKept,
  kTooFewStates,
  kEmptySubset,
  kFullSet,
  kOverlappingSets,
  kDisconnected,
  kHarmonicInconsistency,
  kDepthNotDiverging,
  kStartDependentHitting,
  kCrossCheckMismatch,
  kInternal,
  kStateSpaceTooLarge,
  kInvalidField,
  kNotInOmegaO,
  kNotApplicable,
  kNonPositiveRate,
  kUnderflow,
  kIo,
};

const char* to_string(ErrorCode code);

// 2 for input/model validation failures, 3 for internal consistency
// failures, 1 for everything else.
int exit_code(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace metachain
