// SPDX-License-Identifier: Apache-2.0
#include "sharpgap/sharp_sat.hpp"
#include "sharpgap/error.hpp"

using namespace sharpgap;

CountResult sharpgap::count_sat(const Circuit &c, uint32_t budget) {
  uint32_t n = c.num_inputs();
  if (n > budget)
    fail(ErrorCode::kBudget, "count_sat: " + std::to_string(n) +
                                 " inputs exceed budget " +
                                 std::to_string(budget));
  CountResult r;
  r.n = n;
  bool value;
  if (c.is_constant(&value)) {
    r.count = value ? pow2(n) : BigInt(0);
    return r;
  }
  BitslicedEvaluator ev(c);
  r.count = ev.count_all();
  return r;
}

uint64_t sharpgap::count_sat_naive(const Circuit &c) {
  if (c.num_inputs() > 40)
    fail(ErrorCode::kBudget, "naive count limited to 40 inputs");
  uint64_t total = 0;
  std::vector<uint8_t> x(c.num_inputs());
  for (uint64_t a = 0; a < (uint64_t(1) << c.num_inputs()); ++a) {
    for (uint32_t j = 0; j < x.size(); ++j)
      x[j] = (a >> j) & 1;
    total += evaluate(c, x);
  }
  return total;
}

BigInt sharpgap::count_signed_sum(const SumCircuit &s,
                                  std::span<const uint8_t> fixed,
                                  CountingOracle &oracle) {
  if (fixed.size() > s.num_inputs)
    fail(ErrorCode::kStructural, "count_signed_sum: more bindings than inputs");
  uint64_t index = 0;
  if (fixed.size() > 63)
    fail(ErrorCode::kBudget, "count_signed_sum: at most 63 index inputs");
  for (size_t k = 0; k < fixed.size(); ++k)
    index |= uint64_t(fixed[k] & 1) << k;
  BigInt total = 0;
  for (const SumTerm &term : s.terms) {
    if (term.circuit.num_inputs() != s.num_inputs)
      fail(ErrorCode::kStructural, "sum term arity mismatch");
    Circuit bound = fix_trailing(term.circuit, uint32_t(fixed.size()), index);
    BigInt c = oracle.count(bound);
    if (term.sign > 0)
      total += c;
    else
      total -= c;
  }
  if (s.promised_nonnegative && total < 0)
    fail(ErrorCode::kPromiseViolation,
         "signed sum is negative (" + total.str() +
             ") despite the nonnegativity promise");
  return total;
}
