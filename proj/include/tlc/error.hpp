#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace tlc {

// Single error type with a stable machine-readable code. Codes in use:
// arity-mismatch, no-such-location, unhandled-event, already-failed,
// validation, parse, eval, not-boxed, forbidden-operator, atom-shape,
// level-mismatch, io.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& msg)
      : std::runtime_error(code + ": " + msg), code_(std::move(code)) {}

  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

}  // namespace tlc
