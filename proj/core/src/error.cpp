#include "qhkit/error.hpp"

namespace qhkit {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidInput: return "invalid-input";
    case ErrorCode::kSamplingExhausted: return "sampling-exhausted";
    case ErrorCode::kNotConnected: return "not-connected";
    case ErrorCode::kArcExitsDomain: return "arc-exits-domain";
    case ErrorCode::kDegenerateDomain: return "degenerate-domain";
    case ErrorCode::kUndefinedRatio: return "undefined-ratio";
    case ErrorCode::kConfiguration: return "configuration";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kInternal: return "internal";
  }
  return "unknown";
}

}  // namespace qhkit
