#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace herdsig {

enum class ErrorCode {
  InvalidArgument,
  MalformedContainer,
  UnsupportedEncoding,
  EmptyAudio,
  ClipTooShort,
  IoFailure,
  NonPowerOfTwoSize,
  ZeroEnergyFrame,
  TooManyFilters,
  NoVoicedFrames,
  FormantsUnresolved,
  MissingCoreFeature,
  NyquistViolation,
  ClassTooSmall,
  EmptyTrainingSet,
  NotStandardized,
  DimensionMismatch,
  EmptySequence,
  LengthMismatch,
  SingleClassInput,
  SchemaMismatch,
};

std::string_view error_code_name(ErrorCode code) noexcept;

// Every recoverable failure in the library is reported as an Error carrying
// a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace herdsig
