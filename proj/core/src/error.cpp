#include "bartree/error.hpp"

namespace bartree {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::Ambiguous: return "Ambiguous";
    case ErrorCode::SubRoiNotFound: return "SubRoiNotFound";
    case ErrorCode::DegenerateProfile: return "DegenerateProfile";
    case ErrorCode::InvalidRatio: return "InvalidRatio";
    case ErrorCode::ParamMismatch: return "ParamMismatch";
    case ErrorCode::CorruptFingerprint: return "CorruptFingerprint";
    case ErrorCode::NetworkError: return "NetworkError";
    case ErrorCode::HttpStatus: return "HttpStatus";
    case ErrorCode::Timeout: return "Timeout";
    case ErrorCode::DuplicateTarget: return "DuplicateTarget";
    case ErrorCode::UnknownTarget: return "UnknownTarget";
    case ErrorCode::PatternStale: return "PatternStale";
    case ErrorCode::CorruptStore: return "CorruptStore";
    case ErrorCode::Inapplicable: return "Inapplicable";
  }
  return "Unknown";
}

}  // namespace bartree
