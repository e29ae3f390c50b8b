#pragma once

#include <stdexcept>
#include <string>

namespace qhkit {

enum class ErrorCode {
  kInvalidInput,
  kSamplingExhausted,
  kNotConnected,
  kArcExitsDomain,
  kDegenerateDomain,
  kUndefinedRatio,
  kConfiguration,
  kIo,
  kInternal,
};

const char* to_string(ErrorCode code) noexcept;

/// Every failure raised by the toolkit carries a machine-readable code so batch
/// runners can record it per row instead of aborting.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace qhkit
