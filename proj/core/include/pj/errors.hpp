#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace pj {

/// Failure with a stable machine-readable code alongside the human message.
/// Codes distinguish rejected input (constraint and precondition violations)
/// from numerical breakdown, so callers can map them to exit codes or reports
/// without parsing message text.
class Error : public std::runtime_error {
public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(code + ": " + what), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

private:
  std::string code_;
};

[[noreturn]] inline void fail(std::string code, const std::string& what) {
  throw Error(std::move(code), what);
}

}  // namespace pj
