// SPDX-License-Identifier: Apache-2.0
//
// Reference implementations used only by the tests. None of them call into
// the code under test beyond reading its plain data structures.
#pragma once

#include "sharpgap/circuit.hpp"
#include "sharpgap/codec.hpp"
#include "sharpgap/fglss.hpp"
#include "sharpgap/reduce.hpp"
#include "sharpgap/rng.hpp"
#include "sharpgap/symrep.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <map>
#include <set>

namespace oracle {

using namespace sharpgap;

/// Memoized recursive evaluation from the output gate.
inline bool eval(const Circuit &c, uint64_t x) {
  const auto &g = c.gates();
  std::vector<int8_t> memo(g.size(), -1);
  std::function<bool(uint32_t)> rec = [&](uint32_t id) -> bool {
    if (memo[id] >= 0)
      return memo[id];
    const Gate &gt = g[id];
    bool v = false;
    switch (gt.op) {
    case Op::kInput: v = (x >> gt.a) & 1; break;
    case Op::kConst0: v = false; break;
    case Op::kConst1: v = true; break;
    case Op::kNot: v = !rec(gt.a); break;
    case Op::kAnd: v = rec(gt.a) && rec(gt.b); break;
    case Op::kOr: v = rec(gt.a) || rec(gt.b); break;
    case Op::kXor: v = rec(gt.a) != rec(gt.b); break;
    }
    memo[id] = v;
    return v;
  };
  return rec(c.output());
}

inline uint64_t count(const Circuit &c) {
  uint64_t total = 0;
  for (uint64_t x = 0; x < (uint64_t(1) << c.num_inputs()); ++x)
    total += eval(c, x);
  return total;
}

/// Random circuit given as a raw gate list (no folding or hashing).
inline Circuit random_circuit(SplitMix64 &rng, uint32_t n, uint32_t gates) {
  std::vector<Gate> g;
  for (uint32_t j = 0; j < n; ++j)
    g.push_back({Op::kInput, j, 0});
  if (n == 0)
    g.push_back({rng.below(2) ? Op::kConst1 : Op::kConst0, 0, 0});
  for (uint32_t k = 0; k < gates; ++k) {
    uint32_t a = uint32_t(rng.below(g.size()));
    uint32_t b = uint32_t(rng.below(g.size()));
    // Bias towards recent gates so outputs depend on most of the circuit.
    if (rng.below(2))
      a = uint32_t(g.size() - 1);
    switch (rng.below(7)) {
    case 0: case 1: g.push_back({Op::kAnd, a, b}); break;
    case 2: case 3: g.push_back({Op::kOr, a, b}); break;
    case 4: g.push_back({Op::kXor, a, b}); break;
    case 5: g.push_back({Op::kNot, a, 0}); break;
    default:
      g.push_back({rng.below(2) ? Op::kConst1 : Op::kConst0, 0, 0});
      break;
    }
  }
  return Circuit(n, std::move(g), uint32_t(g.size() - 1));
}

/// Random circuit with no satisfying assignment: r AND NOT (r OR s).
inline Circuit random_unsat(SplitMix64 &rng, uint32_t n, uint32_t gates) {
  Circuit r = random_circuit(rng, n, gates);
  Circuit s = random_circuit(rng, n, gates);
  std::vector<Gate> g = r.gates();
  uint32_t ro = r.output();
  uint32_t off = uint32_t(g.size());
  for (Gate gt : s.gates()) {
    if (gt.op != Op::kInput) {
      unsigned ar = op_arity(gt.op);
      if (ar >= 1) gt.a += off;
      if (ar == 2) gt.b += off;
    }
    g.push_back(gt);
  }
  uint32_t so = off + s.output();
  g.push_back({Op::kOr, ro, so});
  g.push_back({Op::kNot, uint32_t(g.size() - 1), 0});
  g.push_back({Op::kAnd, ro, uint32_t(g.size() - 1)});
  return Circuit(n, std::move(g), uint32_t(g.size() - 1));
}

/// Random circuit with at least half of all inputs satisfying: r OR x_j.
inline Circuit random_half_sat(SplitMix64 &rng, uint32_t n, uint32_t gates) {
  Circuit r = random_circuit(rng, n, gates);
  std::vector<Gate> g = r.gates();
  uint32_t j = uint32_t(rng.below(n));
  g.push_back({Op::kOr, r.output(), j});
  return Circuit(n, std::move(g), uint32_t(g.size() - 1));
}

inline uint32_t tally(const EmajCircuit &e, uint64_t x) {
  uint32_t t = 0;
  for (const auto &c : e.subcircuits)
    t += eval(c, x);
  return t;
}

inline int64_t sum_value(const SumCircuit &s, uint64_t x) {
  int64_t v = 0;
  for (const auto &term : s.terms)
    v += term.sign * int64_t(eval(term.circuit, x));
  return v;
}

/// Codeword bit i of x (n <= 64), straight from the generator masks.
inline bool enc_bit(const LinearCode &code, uint32_t i, uint64_t x) {
  return std::popcount(code.rows()[i][0] & x) & 1;
}

inline std::vector<uint8_t> enc(const LinearCode &code, uint64_t x) {
  std::vector<uint8_t> out(code.cn());
  for (uint32_t i = 0; i < code.cn(); ++i)
    out[i] = enc_bit(code, i, x);
  return out;
}

/// Max satisfied groups over all completions of tau, by enumerating the
/// free variables that occur in the formula.
inline size_t maxsat(const CnfInstance &f, const PartialAssignment &tau) {
  uint32_t nv = f.num_vars();
  std::vector<uint32_t> free_vars;
  std::vector<uint8_t> used(nv + 1, 0);
  for (const auto &cl : f.clauses)
    for (int32_t l : cl)
      used[std::abs(l)] = 1;
  std::vector<uint8_t> a(nv, 0);
  for (uint32_t v = 1; v <= nv; ++v) {
    int8_t t = v - 1 < tau.size() ? tau[v - 1] : -1;
    if (t >= 0)
      a[v - 1] = uint8_t(t);
    else if (used[v])
      free_vars.push_back(v);
  }
  size_t best = 0;
  for (uint64_t m = 0; m < (uint64_t(1) << free_vars.size()); ++m) {
    for (size_t k = 0; k < free_vars.size(); ++k)
      a[free_vars[k] - 1] = (m >> k) & 1;
    size_t sat = 0;
    for (const auto &grp : f.groups) {
      bool ok = true;
      for (uint32_t ci : grp) {
        bool cs = false;
        for (int32_t l : f.clauses[ci])
          cs |= (a[std::abs(l) - 1] == 1) == (l > 0);
        ok &= cs;
      }
      sat += ok;
    }
    best = std::max(best, sat);
  }
  return best;
}

/// Max independent set respecting labels, by include/exclude recursion over
/// the unlabeled vertices. Group structure is not used.
inline size_t mis(const GisInstance &g, const VertexLabeling &pi) {
  size_t n = g.num_vertices();
  std::set<std::pair<uint32_t, uint32_t>> edges(g.edges.begin(), g.edges.end());
  auto adjacent = [&](uint32_t a, uint32_t b) {
    return edges.count({std::min(a, b), std::max(a, b)}) > 0;
  };
  std::vector<uint32_t> chosen;
  for (uint32_t v = 0; v < n; ++v)
    if (pi[v] == 1)
      chosen.push_back(v);
  for (size_t a = 0; a < chosen.size(); ++a)
    for (size_t b = a + 1; b < chosen.size(); ++b)
      if (adjacent(chosen[a], chosen[b]))
        return 0;
  std::vector<uint32_t> cand;
  for (uint32_t v = 0; v < n; ++v)
    if (pi[v] == -1)
      cand.push_back(v);
  size_t best = 0;
  std::function<void(size_t)> rec = [&](size_t i) {
    if (chosen.size() + (cand.size() - i) <= best)
      return;
    if (i == cand.size()) {
      best = std::max(best, chosen.size());
      return;
    }
    uint32_t v = cand[i];
    bool ok = true;
    for (uint32_t c : chosen)
      if (adjacent(c, v)) {
        ok = false;
        break;
      }
    if (ok) {
      chosen.push_back(v);
      rec(i + 1);
      chosen.pop_back();
    }
    rec(i + 1);
  };
  rec(0);
  return best;
}

/// Random CNF over y Y-variables and z Z-variables with clauses of width
/// 1..3 partitioned into at most max_groups groups.
inline CnfInstance random_grouped_cnf(SplitMix64 &rng, uint32_t y, uint32_t z,
                                      size_t clauses, size_t max_groups) {
  CnfInstance f;
  f.y_vars = y;
  f.z_vars = z;
  uint32_t nv = y + z;
  for (size_t c = 0; c < clauses; ++c) {
    Clause cl;
    size_t w = std::min<size_t>(1 + rng.below(3), nv);
    while (cl.size() < w) {
      int32_t v = 1 + int32_t(rng.below(nv));
      bool dup = false;
      for (int32_t l : cl)
        dup |= std::abs(l) == v;
      if (!dup)
        cl.push_back(rng.below(2) ? v : -v);
    }
    f.clauses.push_back(cl);
  }
  size_t ng = std::min(clauses, 1 + size_t(rng.below(max_groups)));
  f.groups.assign(ng, {});
  for (uint32_t c = 0; c < clauses; ++c)
    f.groups[c < ng ? c : rng.below(ng)].push_back(c);
  for (auto &grp : f.groups)
    std::sort(grp.begin(), grp.end());
  return f;
}

} // namespace oracle
