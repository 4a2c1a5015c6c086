#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bartree {

enum class ErrorCode {
  InvalidInput,
  NotFound,
  Ambiguous,
  SubRoiNotFound,
  DegenerateProfile,
  InvalidRatio,
  ParamMismatch,
  CorruptFingerprint,
  NetworkError,
  HttpStatus,
  Timeout,
  DuplicateTarget,
  UnknownTarget,
  PatternStale,
  CorruptStore,
  Inapplicable,
};

std::string_view to_string(ErrorCode code) noexcept;

// Single exception type for every operational failure in the library.
// `detail` carries the HTTP status for HttpStatus, the match count for
// Ambiguous, and is zero otherwise.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what, long detail = 0)
      : std::runtime_error(what), code_(code), detail_(detail) {}

  ErrorCode code() const noexcept { return code_; }
  long detail() const noexcept { return detail_; }

  // Fetch failures the scheduler may retry later.
  bool is_fetch_error() const noexcept {
    return code_ == ErrorCode::NetworkError || code_ == ErrorCode::HttpStatus ||
           code_ == ErrorCode::Timeout;
  }

 private:
  ErrorCode code_;
  long detail_;
};

}  // namespace bartree
