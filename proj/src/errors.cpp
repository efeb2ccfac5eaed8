#include "azu/errors.hpp"

namespace azu {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::backend_mismatch: return "backend-mismatch";
    case ErrorCode::signature_mismatch: return "signature-mismatch";
    case ErrorCode::shape_mismatch: return "shape-mismatch";
    case ErrorCode::parity: return "parity";
    case ErrorCode::domain: return "domain";
    case ErrorCode::not_invertible: return "not-invertible";
    case ErrorCode::not_coprime: return "not-coprime";
    case ErrorCode::needs_hint: return "needs-hint";
    case ErrorCode::spectrum_not_real: return "spectrum-not-real";
    case ErrorCode::precondition: return "precondition";
    case ErrorCode::parse: return "parse";
    case ErrorCode::input: return "input";
    case ErrorCode::internal: return "internal";
  }
  return "unknown";
}

}  // namespace azu
