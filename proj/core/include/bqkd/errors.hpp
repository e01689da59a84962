#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bqkd {

enum class ErrorCode {
  DimensionNotEven,
  DimensionTooSmall,
  DimensionMismatch,
  InvalidPartition,
  NotUnitary,
  NotNormalized,
  IndexOutOfRange,
  UnsupportedDimension,
  NoClosedForm,
  MissingAncillaMap,
  DirectionUnsupported,
  TransportFailure,
  FramingError,
  ConfigInvalid,
  ConfigMismatch,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; the code identifies the failure class.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace bqkd
