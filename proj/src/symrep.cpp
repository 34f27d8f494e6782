// SPDX-License-Identifier: Apache-2.0
#include "sharpgap/symrep.hpp"
#include "sharpgap/error.hpp"

#include <algorithm>
#include <bit>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

using namespace sharpgap;

void EmajCircuit::validate() const {
  for (const Circuit &c : subcircuits)
    if (c.num_inputs() != num_inputs)
      fail(ErrorCode::kStructural, "EMAJ subcircuit arity mismatch");
  if (u > subcircuits.size())
    fail(ErrorCode::kStructural, "EMAJ threshold exceeds subcircuit count");
}

bool sharpgap::emaj_eval(const EmajCircuit &e, std::span<const uint8_t> x) {
  e.validate();
  size_t count = 0;
  for (const Circuit &c : e.subcircuits)
    count += evaluate(c, x);
  return count == e.u;
}

bool sharpgap::emaj_eval_index(const EmajCircuit &e, uint64_t assignment) {
  size_t count = 0;
  for (const Circuit &c : e.subcircuits)
    count += evaluate_index(c, assignment);
  return count == e.u;
}

namespace {

// Runs of consecutive circuits sharing storage are evaluated once.
template <typename Weight, typename Fn>
void for_each_run(const std::vector<Circuit> &cs, Weight weight_of, Fn fn) {
  size_t i = 0;
  while (i < cs.size()) {
    size_t j = i + 1;
    auto w = weight_of(i);
    while (j < cs.size() && &cs[j].gates() == &cs[i].gates() &&
           cs[j].output() == cs[i].output()) {
      w += weight_of(j);
      ++j;
    }
    fn(cs[i], w);
    i = j;
  }
}

template <typename T>
void accumulate_table(const Circuit &c, T weight, std::vector<T> &table) {
  uint32_t n = c.num_inputs();
  BitslicedEvaluator ev(c);
  if (n < 6) {
    TruthSlice s = ev.slice(0);
    for (uint32_t b = 0; b < s.width; ++b)
      if ((s.word >> b) & 1)
        table[b] += weight;
    return;
  }
  for (uint64_t base = 0; base < (uint64_t(1) << n); base += 64) {
    uint64_t w = ev.slice(base).word;
    while (w) {
      int b = __builtin_ctzll(w);
      table[base + b] += weight;
      w &= w - 1;
    }
  }
}

void require_table_size(uint32_t n) {
  if (n > 24)
    fail(ErrorCode::kBudget, "truth tables are limited to 24 inputs");
}

} // namespace

std::vector<uint32_t> sharpgap::emaj_tally_table(const EmajCircuit &e) {
  e.validate();
  require_table_size(e.num_inputs);
  std::vector<uint32_t> tally(size_t(1) << e.num_inputs, 0);
  for_each_run(
      e.subcircuits, [](size_t) { return uint32_t(1); },
      [&](const Circuit &c, uint32_t w) { accumulate_table(c, w, tally); });
  return tally;
}

std::vector<uint8_t> sharpgap::emaj_truth_table(const EmajCircuit &e) {
  std::vector<uint32_t> tally = emaj_tally_table(e);
  std::vector<uint8_t> out(tally.size());
  for (size_t a = 0; a < tally.size(); ++a)
    out[a] = tally[a] == e.u;
  return out;
}

SumCircuit sharpgap::emaj_to_sum(const EmajCircuit &e) {
  e.validate();
  const size_t t = e.t();
  const uint32_t n = e.num_inputs;
  SumCircuit s;
  s.num_inputs = n;
  s.promised_nonnegative = true;

  bool complement = 2 * size_t(e.u) > t;
  int64_t u = complement ? int64_t(t - e.u) : int64_t(e.u);
  std::vector<Circuit> d;
  d.reserve(t);
  for (const Circuit &c : e.subcircuits)
    d.push_back(complement ? negate(c) : c);

  // Off-diagonal ordered pairs; (i,j) and (j,i) share one circuit.
  for (size_t i = 0; i < t; ++i)
    for (size_t j = i + 1; j < t; ++j) {
      Circuit p = and2(d[i], d[j]);
      s.terms.push_back({+1, p});
      s.terms.push_back({+1, p});
    }
  // Diagonal D_i plus the linear part -2u*D_i: net (1 - 2u) copies.
  int64_t linear = 1 - 2 * u;
  for (size_t i = 0; i < t; ++i)
    for (int64_t r = 0; r < std::abs(linear); ++r)
      s.terms.push_back({linear > 0 ? +1 : -1, d[i]});
  Circuit one = all_ones(n);
  for (int64_t r = 0; r < u * u; ++r)
    s.terms.push_back({+1, one});
  return s;
}

int64_t sharpgap::sum_eval(const SumCircuit &s, std::span<const uint8_t> x) {
  if (x.size() != s.num_inputs)
    fail(ErrorCode::kStructural, "sum_eval: wrong assignment width");
  int64_t total = 0;
  for (const SumTerm &term : s.terms)
    total += term.sign * int64_t(evaluate(term.circuit, x));
  return total;
}

int64_t sharpgap::sum_eval_index(const SumCircuit &s, uint64_t assignment) {
  int64_t total = 0;
  for (const SumTerm &term : s.terms)
    total += term.sign * int64_t(evaluate_index(term.circuit, assignment));
  return total;
}

std::vector<int64_t> sharpgap::sum_table(const SumCircuit &s) {
  require_table_size(s.num_inputs);
  std::vector<int64_t> table(size_t(1) << s.num_inputs, 0);
  std::vector<Circuit> cs;
  cs.reserve(s.terms.size());
  for (const SumTerm &term : s.terms) {
    if (term.circuit.num_inputs() != s.num_inputs)
      fail(ErrorCode::kStructural, "sum term arity mismatch");
    cs.push_back(term.circuit);
  }
  // Group by sign as well as storage: the weight carries the sign.
  size_t i = 0;
  while (i < cs.size()) {
    size_t j = i + 1;
    int64_t w = s.terms[i].sign;
    while (j < cs.size() && &cs[j].gates() == &cs[i].gates() &&
           cs[j].output() == cs[i].output()) {
      w += s.terms[j].sign;
      ++j;
    }
    if (w != 0)
      accumulate_table(cs[i], w, table);
    i = j;
  }
  return table;
}

//===----------------------------------------------------------------------===//
// Sparse symmetric functions
//===----------------------------------------------------------------------===//

bool SparseSymmetric::eval_index(uint64_t assignment) const {
  uint32_t w = uint32_t(std::popcount(assignment));
  return std::find(support.begin(), support.end(), w) != support.end();
}

static SparseSymmetric normalized(const SparseSymmetric &f) {
  SparseSymmetric g = f;
  std::sort(g.support.begin(), g.support.end());
  g.support.erase(std::unique(g.support.begin(), g.support.end()),
                  g.support.end());
  for (uint32_t v : g.support)
    if (v > g.n)
      fail(ErrorCode::kInvalidArgument,
           "support value " + std::to_string(v) + " exceeds n");
  return g;
}

std::vector<BigInt> sharpgap::sparse_degree_coefficients(const SparseSymmetric &f) {
  SparseSymmetric g = normalized(f);
  size_t k = g.support.size();
  // p(w) at w = 0..k, then c_s = sum_r (-1)^(s-r) C(s,r) p(r).
  std::vector<BigInt> p(k + 1);
  for (size_t w = 0; w <= k; ++w) {
    BigInt v = 1;
    for (uint32_t s : g.support)
      v *= BigInt(int64_t(w) - int64_t(s));
    p[w] = v;
  }
  std::vector<BigInt> coef(k + 1);
  for (size_t s = 0; s <= k; ++s) {
    BigInt c = 0, binom = 1;
    for (size_t r = 0; r <= s; ++r) {
      if (r > 0)
        binom = binom * BigInt(s - r + 1) / BigInt(r);
      if ((s - r) % 2)
        c -= binom * p[r];
      else
        c += binom * p[r];
    }
    coef[s] = c;
  }
  return coef;
}

namespace {

// Calls fn on every size-s subset of {0..n-1} in lexicographic order.
template <typename Fn> void for_each_subset(uint32_t n, uint32_t s, Fn fn) {
  std::vector<uint32_t> idx(s);
  for (uint32_t i = 0; i < s; ++i)
    idx[i] = i;
  if (s > n)
    return;
  while (true) {
    fn(idx);
    int i = int(s) - 1;
    while (i >= 0 && idx[i] == n - s + uint32_t(i))
      --i;
    if (i < 0)
      return;
    ++idx[i];
    for (uint32_t j = uint32_t(i) + 1; j < s; ++j)
      idx[j] = idx[j - 1] + 1;
  }
}

} // namespace

std::vector<Monomial> sharpgap::sparse_polynomial(const SparseSymmetric &f) {
  std::vector<BigInt> coef = sparse_degree_coefficients(f);
  std::vector<Monomial> out;
  for (uint32_t s = 0; s < coef.size(); ++s) {
    if (coef[s] == 0)
      continue;
    for_each_subset(f.n, s, [&](const std::vector<uint32_t> &vars) {
      out.push_back(Monomial{vars, coef[s]});
    });
  }
  return out;
}

EmajCircuit sharpgap::sparse_to_emaj_ands(const SparseSymmetric &f,
                                          size_t max_subcircuits) {
  SparseSymmetric g = normalized(f);
  size_t k = g.support.size();
  if (2 * k >= g.n)
    fail(ErrorCode::kUnsupported,
         "sparse expansion requires |support| < n/2 (k=" + std::to_string(k) +
             ", n=" + std::to_string(g.n) + ")");
  std::vector<BigInt> coef = sparse_degree_coefficients(g);

  BigInt total = 0, neg = 0;
  for (uint32_t s = 0; s <= k; ++s) {
    BigInt mag = abs(coef[s]);
    BigInt monomials = 1;
    for (uint32_t r = 0; r < s; ++r)
      monomials = monomials * BigInt(g.n - r) / BigInt(r + 1);
    if (coef[s] < 0)
      neg += mag * monomials;
    if (s > 0 || coef[s] > 0)
      total += mag * monomials;
  }
  if (total > max_subcircuits || neg > max_subcircuits)
    fail(ErrorCode::kBudget, "sparse expansion needs " + total.str() +
                                 " subcircuits, budget " +
                                 std::to_string(max_subcircuits));

  EmajCircuit e;
  e.num_inputs = g.n;
  e.u = uint32_t(neg);
  for (uint32_t s = 0; s <= k; ++s) {
    if (coef[s] == 0)
      continue;
    size_t copies = size_t(abs(coef[s]));
    bool negative = coef[s] < 0;
    if (s == 0) {
      // NAND of the empty set is CONST0: it only shifts u.
      if (!negative)
        for (size_t r = 0; r < copies; ++r)
          e.subcircuits.push_back(all_ones(g.n));
      continue;
    }
    for_each_subset(g.n, s, [&](const std::vector<uint32_t> &vars) {
      CircuitBuilder b(g.n);
      std::vector<uint32_t> ids;
      for (uint32_t v : vars)
        ids.push_back(b.input(v));
      uint32_t out = b.land_all(ids);
      if (negative)
        out = b.lnot(out);
      Circuit c = b.build(out);
      for (size_t r = 0; r < copies; ++r)
        e.subcircuits.push_back(c);
    });
  }
  // Keep u <= t; the padding is the same CONST0 the empty NAND denotes.
  while (e.subcircuits.size() < e.u)
    e.subcircuits.push_back(all_zeros(g.n));
  return e;
}

//===----------------------------------------------------------------------===//
// Serialization
//===----------------------------------------------------------------------===//

void sharpgap::write_emaj(std::ostream &os, const EmajCircuit &e) {
  e.validate();
  os << "emaj u=" << e.u;
  if (e.subcircuits.empty())
    os << " inputs=" << e.num_inputs;
  os << '\n';
  for (const Circuit &c : e.subcircuits)
    write_netlist(os, c);
}

std::string sharpgap::format_emaj(const EmajCircuit &e) {
  std::ostringstream os;
  write_emaj(os, e);
  return os.str();
}

static bool blank_or_comment(const std::string &line) {
  size_t p = line.find_first_not_of(" \t\r");
  return p == std::string::npos || line[p] == '#';
}

EmajCircuit sharpgap::read_emaj(std::istream &is, size_t &line_no) {
  std::string line;
  while (true) {
    if (!std::getline(is, line))
      fail(ErrorCode::kParse, "emaj: missing header");
    ++line_no;
    if (!blank_or_comment(line))
      break;
  }
  std::istringstream hs(line.substr(0, line.find('#')));
  std::string tag;
  hs >> tag;
  if (tag != "emaj")
    fail(ErrorCode::kParse,
         "line " + std::to_string(line_no) + ": expected 'emaj u=<u>'");
  EmajCircuit e;
  bool have_u = false, have_inputs = false;
  for (std::string kv; hs >> kv;) {
    size_t eq = kv.find('=');
    std::string key = kv.substr(0, eq);
    std::string val = eq == std::string::npos ? "" : kv.substr(eq + 1);
    if (val.empty() || val.find_first_not_of("0123456789") != std::string::npos ||
        val.size() > 9)
      fail(ErrorCode::kParse, "line " + std::to_string(line_no) +
                                  ": bad field '" + kv + "'");
    if (key == "u") {
      e.u = uint32_t(std::stoul(val));
      have_u = true;
    } else if (key == "inputs") {
      e.num_inputs = uint32_t(std::stoul(val));
      have_inputs = true;
    } else {
      fail(ErrorCode::kParse, "line " + std::to_string(line_no) +
                                  ": unknown field '" + key + "'");
    }
  }
  if (!have_u)
    fail(ErrorCode::kParse, "line " + std::to_string(line_no) +
                                ": emaj header lacks u=");
  while (true) {
    std::streampos pos = is.tellg();
    size_t saved = line_no;
    bool more = false;
    while (std::getline(is, line)) {
      ++line_no;
      if (!blank_or_comment(line)) {
        more = true;
        break;
      }
    }
    if (!more)
      break;
    is.clear();
    is.seekg(pos);
    line_no = saved;
    e.subcircuits.push_back(read_netlist(is, line_no));
  }
  if (!e.subcircuits.empty()) {
    uint32_t n = e.subcircuits.front().num_inputs();
    if (have_inputs && n != e.num_inputs)
      fail(ErrorCode::kParse, "emaj: inputs= disagrees with subcircuits");
    e.num_inputs = n;
  }
  try {
    e.validate();
  } catch (const Error &err) {
    fail(ErrorCode::kParse, std::string("emaj: ") + err.what());
  }
  return e;
}

EmajCircuit sharpgap::parse_emaj(const std::string &text) {
  std::istringstream is(text);
  size_t line_no = 0;
  return read_emaj(is, line_no);
}
