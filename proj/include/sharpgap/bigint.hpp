// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace sharpgap {

using BigInt = boost::multiprecision::cpp_int;

inline std::string to_decimal(const BigInt &value) { return value.str(); }

/// 2^bits as an exact integer.
inline BigInt pow2(unsigned bits) {
  BigInt r = 1;
  r <<= bits;
  return r;
}

} // namespace sharpgap
