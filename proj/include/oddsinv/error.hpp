#pragma once

#include <stdexcept>
#include <string>

namespace oddsinv {

enum class ErrorCode {
  invalid_argument,
  partition_mismatch,
  domain,
  degenerate,
  pole,
  unreliable,
  config,
  io,
};

//! Base exception for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace oddsinv
