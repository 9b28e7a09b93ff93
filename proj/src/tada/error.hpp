#pragma once

#include <stdexcept>
#include <string>

namespace tada {

enum class ErrorCode {
  kInvalidArgument = 1,
  kIo,
  kParse,
  kNonFinite,
  kDimensionMismatch,
  kTooFewSamples,
  kOrderTooLarge,
  kVersionMismatch,
  kCorruptFile,
  kDegenerate,
  kSizeLimit,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) { throw Error(code, msg); }

inline void require(bool cond, ErrorCode code, const std::string& msg) {
  if (!cond) fail(code, msg);
}

// Non-fatal diagnostics (degenerate centers, uncovered timestamps, advisory
// bounds) go to stderr; callers track counts through the result structs.
void warn(const std::string& msg);

}  // namespace tada
