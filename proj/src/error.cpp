#include "imbed/error.hpp"

namespace imbed {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::validation: return "validation";
    case ErrorCode::mismatch: return "mismatch";
    case ErrorCode::precondition: return "precondition";
    case ErrorCode::resource_cap: return "resource_cap";
    case ErrorCode::view_too_small: return "view_too_small";
    case ErrorCode::config: return "config";
  }
  return "unknown";
}

}  // namespace imbed
