#include "bqkd/errors.hpp"

namespace bqkd {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionNotEven: return "DimensionNotEven";
    case ErrorCode::DimensionTooSmall: return "DimensionTooSmall";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidPartition: return "InvalidPartition";
    case ErrorCode::NotUnitary: return "NotUnitary";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorCode::NoClosedForm: return "NoClosedForm";
    case ErrorCode::MissingAncillaMap: return "MissingAncillaMap";
    case ErrorCode::DirectionUnsupported: return "DirectionUnsupported";
    case ErrorCode::TransportFailure: return "TransportFailure";
    case ErrorCode::FramingError: return "FramingError";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::ConfigMismatch: return "ConfigMismatch";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace bqkd
