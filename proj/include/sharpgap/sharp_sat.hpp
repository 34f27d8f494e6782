// SPDX-License-Identifier: Apache-2.0
//
// Exact model counting for circuits and signed sums of circuits.
#pragma once

#include "sharpgap/bigint.hpp"
#include "sharpgap/circuit.hpp"
#include "sharpgap/symrep.hpp"

namespace sharpgap {

struct CountResult {
  uint32_t n = 0; // free inputs
  BigInt count;
};

/// Exhaustive bitsliced count of satisfying assignments. Throws
/// Error(kBudget) when c has more than \p budget inputs.
CountResult count_sat(const Circuit &c, uint32_t budget = 28);

/// Reference count by single-assignment evaluation; used to measure the
/// bitsliced path.
uint64_t count_sat_naive(const Circuit &c);

/// The #SAT oracle consumed by the verifier. Implementations must be exact.
class CountingOracle {
public:
  virtual ~CountingOracle() = default;
  BigInt count(const Circuit &c) {
    ++calls_;
    return do_count(c);
  }
  uint64_t calls() const { return calls_; }
  void reset_calls() { calls_ = 0; }

protected:
  virtual BigInt do_count(const Circuit &c) = 0;

private:
  uint64_t calls_ = 0;
};

class ExhaustiveOracle : public CountingOracle {
public:
  explicit ExhaustiveOracle(uint32_t budget = 28) : budget_(budget) {}

protected:
  BigInt do_count(const Circuit &c) override {
    return count_sat(c, budget_).count;
  }

private:
  uint32_t budget_;
};

/// sum over the free inputs of S(x, fixed), where `fixed` binds the trailing
/// index inputs (fixed[k] is the value of input num_inputs - |fixed| + k),
/// as sum_j sign_j * #SAT(C_j with the index inputs bound). Throws
/// Error(kPromiseViolation) if the total is negative while S is promised
/// nonnegative.
BigInt count_signed_sum(const SumCircuit &s, std::span<const uint8_t> fixed,
                        CountingOracle &oracle);

} // namespace sharpgap
