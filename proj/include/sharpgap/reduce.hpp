// SPDX-License-Identifier: Apache-2.0
//
// Circuit to grouped CNF over a Y/Z variable split, serial repetition, and a
// brute-force max-satisfiable-groups oracle.
//
// Variables are 1-based; literal +v / -v. The Y variables are 1..y_vars and
// hold a codeword; the Z variables follow them.
#pragma once

#include "sharpgap/circuit.hpp"
#include "sharpgap/codec.hpp"

#include <array>
#include <memory>
#include <string>
#include <vector>

namespace sharpgap {

using Clause = std::vector<int32_t>;

struct CnfInstance {
  uint32_t y_vars = 0;
  uint32_t z_vars = 0;
  std::vector<Clause> clauses;
  /// Partition of clause indices into groups. A group is satisfied when all
  /// its clauses are. Without repetition every clause is its own group.
  std::vector<std::vector<uint32_t>> groups;

  uint32_t num_vars() const { return y_vars + z_vars; }
  size_t num_groups() const { return groups.size(); }
  uint32_t clause_width() const;
  /// Throws Error(kStructural) on empty clauses, undeclared variables, or a
  /// group list that is not a partition.
  void validate() const;
  void set_singleton_groups();
};

/// value[v-1] is 0, 1, or -1 (unassigned). An empty vector assigns nothing.
using PartialAssignment = std::vector<int8_t>;

/// Partial assignment fixing the Y variables to \p codeword.
PartialAssignment y_assignment(const CnfInstance &f,
                               std::span<const uint8_t> codeword);

bool clause_satisfied(const Clause &c, std::span<const uint8_t> assignment);
/// Number of satisfied groups under a full assignment (value[v-1]).
size_t satisfied_groups(const CnfInstance &f,
                        std::span<const uint8_t> assignment);

struct CspReduction;

/// What a variable of the reduction stands for.
struct VarSource {
  enum Kind : uint8_t { kCodeword, kInputCopy, kGate, kChainAux } kind;
  uint32_t index; // codeword bit, input, gate id, or aux ordinal
};

/// Produces the satisfying Z-part for a rejected input, and the same
/// assignment as circuit logic for witness construction.
class WitnessExtractor {
public:
  WitnessExtractor() = default;
  WitnessExtractor(Circuit d, LinearCode code);

  uint32_t num_vars() const { return uint32_t(sources_.size()); }
  const std::vector<VarSource> &sources() const { return sources_; }
  /// Full assignment (value[v-1]) for input x: Y = ENC(x), Z = the x-copy,
  /// gate values and parity-chain partial sums.
  std::vector<uint8_t> extract(std::span<const uint8_t> x) const;
  std::vector<uint8_t> extract_index(uint64_t x) const;
  /// Wires every variable as a function of the builder nodes \p x;
  /// result[v-1] is the node computing variable v.
  std::vector<uint32_t> embed(CircuitBuilder &b,
                              std::span<const uint32_t> x) const;

  // Variable layout.
  uint32_t x_var(uint32_t j) const { return code_->cn() + 1 + j; }
  uint32_t gate_var(uint32_t g) const { return gate_vars_[g]; }

private:
  friend CspReduction circuit_to_csp(const Circuit &, const LinearCode &);
  std::shared_ptr<const Circuit> d_;
  std::shared_ptr<const LinearCode> code_;
  std::vector<VarSource> sources_;
  std::vector<uint32_t> gate_vars_; // per gate of d; INPUT gates map to x_var
  // Per codeword bit: the chain of XOR steps (a, b, result) as variables.
  std::vector<std::vector<std::array<uint32_t, 3>>> chains_;
};

struct CspReduction {
  CnfInstance cnf;
  WitnessExtractor extractor;
};

/// Tseitin encoding of "d outputs 0" over gate variables and an x-copy, plus
/// XOR chains forcing Y_i = ENC_i(x-copy). Clause count:
///   m = sum over gates of (AND/OR 3, XOR 4, NOT 2, CONST 1, INPUT 0)
///       + 1 (output unit clause)
///       + sum over codeword bits i of chain(|U_i|),
///   chain(0) = 1, chain(1) = 2, chain(s) = 4(s-1) for s >= 2.
/// Variables: cn + n + (non-INPUT gates) + sum_i max(0, |U_i| - 2).
CspReduction circuit_to_csp(const Circuit &d, const LinearCode &code);

struct RepeatMode {
  enum Kind { kAllTuples, kSampled } kind = kAllTuples;
  uint64_t seed = 0;
  uint64_t count = 0;              // tuples drawn in sampled mode
  uint64_t budget = uint64_t(1) << 20; // max m^k in all-tuples mode
};

/// Replaces the m base groups by k-tuples of groups; each tuple becomes one
/// group holding the union of its members' clauses. All-tuples mode emits the
/// m^k tuples in lexicographic order (last position varies fastest); sampled
/// mode draws `count` tuples with SplitMix64(seed).
CnfInstance serial_repeat(const CnfInstance &f, uint32_t k,
                          const RepeatMode &mode = {});

/// Maximum number of satisfied groups over completions of \p tau. Clauses
/// falsified by tau stay in and count against their group. Throws
/// Error(kBudget) when more than \p budget variables are free.
size_t maxsat(const CnfInstance &f, const PartialAssignment &tau,
              uint32_t budget = 20);

/// DIMACS with `c ypart <count>` and `c group <gid> <clause indices>` comment
/// lines (0-based group and clause indices).
std::string format_dimacs(const CnfInstance &f);
CnfInstance parse_dimacs(const std::string &text);

} // namespace sharpgap
