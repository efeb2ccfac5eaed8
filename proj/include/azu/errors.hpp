#pragma once

#include <stdexcept>
#include <string>

namespace azu {

enum class ErrorCode {
  backend_mismatch,
  signature_mismatch,
  shape_mismatch,
  parity,
  domain,
  not_invertible,
  not_coprime,
  needs_hint,
  spectrum_not_real,
  precondition,
  parse,
  input,
  internal,
};

/// All library failures surface as azu::Error; the code tells callers
/// (notably the CLI) which exit class the failure belongs to.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

const char* error_code_name(ErrorCode code);

}  // namespace azu
