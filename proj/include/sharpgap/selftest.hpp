// SPDX-License-Identifier: Apache-2.0
//
// Quick invariant suite bundled with the library (CLI `selftest`).
#pragma once

#include <cstdint>
#include <string>

namespace sharpgap {

struct SelftestResult {
  bool ok = true;
  /// One `PASS <check>` or `FAIL <check>: <detail>` line per check.
  std::string report;
};

SelftestResult run_selftest(uint64_t seed = 1);

} // namespace sharpgap
