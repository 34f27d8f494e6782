// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace sharpgap {

/// Failure categories shared by every module. The C API maps these one-to-one
/// onto sg_status values.
enum class ErrorCode {
  kStructural = 1,
  kParse,
  kBudget,
  kConstruction,
  kPromiseViolation,
  kInvalidWitness,
  kPlanning,
  kUnsupported,
  kOutOfRange,
  kInvalidArgument,
  kIo,
};

const char *to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string &what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string &what) {
  throw Error(code, what);
}

} // namespace sharpgap
