// SPDX-License-Identifier: Apache-2.0
#include "sharpgap/error.hpp"

namespace sharpgap {

const char *to_string(ErrorCode code) {
  switch (code) {
  case ErrorCode::kStructural:
    return "structural";
  case ErrorCode::kParse:
    return "parse";
  case ErrorCode::kBudget:
    return "budget";
  case ErrorCode::kConstruction:
    return "construction";
  case ErrorCode::kPromiseViolation:
    return "promise-violation";
  case ErrorCode::kInvalidWitness:
    return "invalid-witness";
  case ErrorCode::kPlanning:
    return "planning";
  case ErrorCode::kUnsupported:
    return "unsupported";
  case ErrorCode::kOutOfRange:
    return "out-of-range";
  case ErrorCode::kInvalidArgument:
    return "invalid-argument";
  case ErrorCode::kIo:
    return "io";
  }
  return "unknown";
}

} // namespace sharpgap
