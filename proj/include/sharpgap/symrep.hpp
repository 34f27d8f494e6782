// SPDX-License-Identifier: Apache-2.0
//
// Exact-majority circuits, their signed-sum rewrite, and the expansion of
// sparse symmetric functions into exact majorities of ANDs.
#pragma once

#include "sharpgap/bigint.hpp"
#include "sharpgap/circuit.hpp"

#include <iosfwd>

namespace sharpgap {

/// EMAJ(D_1(x), ..., D_t(x); u): 1 iff exactly u of the D_i are 1.
struct EmajCircuit {
  uint32_t num_inputs = 0;
  std::vector<Circuit> subcircuits;
  uint32_t u = 0;

  size_t t() const { return subcircuits.size(); }
  /// Throws Error(kStructural) on arity mismatch or u > t.
  void validate() const;
};

bool emaj_eval(const EmajCircuit &e, std::span<const uint8_t> x);
bool emaj_eval_index(const EmajCircuit &e, uint64_t assignment);
/// Number of true subcircuits for every assignment (n <= 24).
std::vector<uint32_t> emaj_tally_table(const EmajCircuit &e);
std::vector<uint8_t> emaj_truth_table(const EmajCircuit &e);

struct SumTerm {
  int sign = 1; // +1 or -1
  Circuit circuit;
};

/// Signed sum of 0/1-valued circuits over a shared input arity.
struct SumCircuit {
  uint32_t num_inputs = 0;
  std::vector<SumTerm> terms;
  bool promised_nonnegative = false;
};

/// (sum_i D_i - u)^2 as a signed sum; zero exactly where e is 1, so the sum
/// represents the negation of e. Diagonal products collapse to D_i, the
/// linear part is merged into the diagonal, and when 2u > t the identity
/// sum_i D_i - u = u' - sum_i !D_i with u' = t - u is used instead.
SumCircuit emaj_to_sum(const EmajCircuit &e);

int64_t sum_eval(const SumCircuit &s, std::span<const uint8_t> x);
int64_t sum_eval_index(const SumCircuit &s, uint64_t assignment);
/// Sum value for every assignment (n <= 24). Terms sharing storage are
/// evaluated once.
std::vector<int64_t> sum_table(const SumCircuit &s);

/// Symmetric f on n inputs with f(x) = 1 iff |x| is in `support`.
struct SparseSymmetric {
  uint32_t n = 0;
  std::vector<uint32_t> support;

  bool eval_index(uint64_t assignment) const;
};

struct Monomial {
  std::vector<uint32_t> vars; // 0-based, increasing; empty = constant term
  BigInt coef;
};

/// Coefficient of every degree-s monomial in the multilinear form of
/// E(x) = prod_{v in support} (|x| - v), for s = 0..|support|.
std::vector<BigInt> sparse_degree_coefficients(const SparseSymmetric &f);
/// Nonzero monomials of E in the multilinear basis.
std::vector<Monomial> sparse_polynomial(const SparseSymmetric &f);

/// EMAJ representation of f. A monomial with coefficient c > 0 contributes c
/// copies of AND_S (all-ones for the empty set); c < 0 contributes |c|
/// copies of NAND_S and raises u by |c|, using -AND_S = NAND_S - 1. Throws
/// Error(kUnsupported) unless |support| < n/2 and Error(kBudget) when the
/// copy total exceeds \p max_subcircuits.
EmajCircuit sparse_to_emaj_ands(const SparseSymmetric &f,
                                size_t max_subcircuits = size_t(1) << 22);

void write_emaj(std::ostream &os, const EmajCircuit &e);
std::string format_emaj(const EmajCircuit &e);
/// Parses `emaj u=<u>` followed by netlist blocks until end of input.
EmajCircuit read_emaj(std::istream &is, size_t &line_no);
EmajCircuit parse_emaj(const std::string &text);

} // namespace sharpgap
