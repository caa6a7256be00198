#pragma once

#include <stdexcept>
#include <string>

namespace imbed {

enum class ErrorCode {
  validation,        // malformed input data (graph, group table, space, action, cocycle)
  mismatch,          // incompatible groups or contexts
  precondition,      // e.g. an uncertified system where a certified one is required
  resource_cap,      // ball or view exceeded the configured cap
  view_too_small,    // verification radius cannot support the requested check
  config,            // CLI configuration / schema problems
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

const char* to_string(ErrorCode code) noexcept;

}  // namespace imbed
