// SPDX-License-Identifier: Apache-2.0
#include "sharpgap/reduce.hpp"
#include "sharpgap/error.hpp"
#include "sharpgap/rng.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

using namespace sharpgap;

//===----------------------------------------------------------------------===//
// CnfInstance
//===----------------------------------------------------------------------===//

uint32_t CnfInstance::clause_width() const {
  size_t w = 0;
  for (const Clause &c : clauses)
    w = std::max(w, c.size());
  return uint32_t(w);
}

void CnfInstance::validate() const {
  uint32_t nv = num_vars();
  for (size_t i = 0; i < clauses.size(); ++i) {
    if (clauses[i].empty())
      fail(ErrorCode::kStructural, "clause " + std::to_string(i) + " is empty");
    for (int32_t lit : clauses[i])
      if (lit == 0 || uint32_t(std::abs(lit)) > nv)
        fail(ErrorCode::kStructural, "clause " + std::to_string(i) +
                                         " references undeclared variable " +
                                         std::to_string(lit));
  }
  std::vector<uint8_t> seen(clauses.size(), 0);
  for (size_t g = 0; g < groups.size(); ++g)
    for (uint32_t ci : groups[g]) {
      if (ci >= clauses.size())
        fail(ErrorCode::kStructural,
             "group " + std::to_string(g) + " names a missing clause");
      if (seen[ci]++)
        fail(ErrorCode::kStructural,
             "clause " + std::to_string(ci) + " is in two groups");
    }
  for (size_t ci = 0; ci < clauses.size(); ++ci)
    if (!seen[ci])
      fail(ErrorCode::kStructural,
           "clause " + std::to_string(ci) + " belongs to no group");
}

void CnfInstance::set_singleton_groups() {
  groups.assign(clauses.size(), {});
  for (uint32_t i = 0; i < clauses.size(); ++i)
    groups[i] = {i};
}

PartialAssignment sharpgap::y_assignment(const CnfInstance &f,
                                         std::span<const uint8_t> codeword) {
  if (codeword.size() != f.y_vars)
    fail(ErrorCode::kStructural, "codeword length differs from |Y|");
  PartialAssignment tau(f.num_vars(), -1);
  for (uint32_t i = 0; i < f.y_vars; ++i)
    tau[i] = int8_t(codeword[i] & 1);
  return tau;
}

bool sharpgap::clause_satisfied(const Clause &c,
                                std::span<const uint8_t> assignment) {
  for (int32_t lit : c) {
    uint8_t v = assignment[std::abs(lit) - 1];
    if ((lit > 0) == (v != 0))
      return true;
  }
  return false;
}

size_t sharpgap::satisfied_groups(const CnfInstance &f,
                                  std::span<const uint8_t> assignment) {
  if (assignment.size() != f.num_vars())
    fail(ErrorCode::kStructural, "assignment width differs from variable count");
  size_t count = 0;
  for (const auto &g : f.groups) {
    bool ok = true;
    for (uint32_t ci : g)
      if (!clause_satisfied(f.clauses[ci], assignment)) {
        ok = false;
        break;
      }
    count += ok;
  }
  return count;
}

//===----------------------------------------------------------------------===//
// Circuit to CSP
//===----------------------------------------------------------------------===//

WitnessExtractor::WitnessExtractor(Circuit d, LinearCode code)
    : d_(std::make_shared<const Circuit>(std::move(d))),
      code_(std::make_shared<const LinearCode>(std::move(code))) {
  if (code_->n() != d_->num_inputs())
    fail(ErrorCode::kStructural, "code message length " +
                                     std::to_string(code_->n()) +
                                     " differs from circuit arity " +
                                     std::to_string(d_->num_inputs()));
  uint32_t cn = code_->cn(), n = code_->n();
  for (uint32_t i = 0; i < cn; ++i)
    sources_.push_back({VarSource::kCodeword, i});
  for (uint32_t j = 0; j < n; ++j)
    sources_.push_back({VarSource::kInputCopy, j});
  const auto &gates = d_->gates();
  gate_vars_.resize(gates.size());
  for (uint32_t g = 0; g < gates.size(); ++g) {
    if (gates[g].op == Op::kInput) {
      gate_vars_[g] = x_var(gates[g].a);
      continue;
    }
    sources_.push_back({VarSource::kGate, g});
    gate_vars_[g] = uint32_t(sources_.size());
  }
  uint32_t aux = 0;
  chains_.resize(cn);
  for (uint32_t i = 0; i < cn; ++i) {
    std::vector<uint32_t> u = code_->support(i);
    if (u.size() < 2)
      continue;
    uint32_t acc = x_var(u[0]);
    for (size_t k = 1; k < u.size(); ++k) {
      uint32_t result;
      if (k + 1 == u.size()) {
        result = i + 1;
      } else {
        sources_.push_back({VarSource::kChainAux, aux++});
        result = uint32_t(sources_.size());
      }
      chains_[i].push_back({acc, x_var(u[k]), result});
      acc = result;
    }
  }
}

std::vector<uint8_t>
WitnessExtractor::extract(std::span<const uint8_t> x) const {
  if (x.size() != d_->num_inputs())
    fail(ErrorCode::kStructural, "extract: input has wrong width");
  std::vector<uint8_t> v(sources_.size(), 0);
  std::vector<uint8_t> y = encode(*code_, x);
  for (uint32_t i = 0; i < y.size(); ++i)
    v[i] = y[i];
  for (uint32_t j = 0; j < x.size(); ++j)
    v[x_var(j) - 1] = x[j] & 1;
  const auto &gates = d_->gates();
  for (uint32_t g = 0; g < gates.size(); ++g) {
    const Gate &gt = gates[g];
    uint8_t a = gt.op == Op::kInput ? 0 : v[gate_vars_[gt.a] - 1];
    uint8_t b = v[gate_vars_[gt.b] - 1];
    uint8_t r = 0;
    switch (gt.op) {
    case Op::kInput:
      continue;
    case Op::kAnd:
      r = a & b;
      break;
    case Op::kOr:
      r = a | b;
      break;
    case Op::kXor:
      r = a ^ b;
      break;
    case Op::kNot:
      r = !a;
      break;
    case Op::kConst0:
      r = 0;
      break;
    case Op::kConst1:
      r = 1;
      break;
    }
    v[gate_vars_[g] - 1] = r;
  }
  for (const auto &chain : chains_)
    for (const auto &step : chain)
      v[step[2] - 1] = v[step[0] - 1] ^ v[step[1] - 1];
  return v;
}

std::vector<uint8_t> WitnessExtractor::extract_index(uint64_t x) const {
  std::vector<uint8_t> bits(d_->num_inputs());
  for (uint32_t j = 0; j < bits.size(); ++j)
    bits[j] = (x >> j) & 1;
  return extract(bits);
}

std::vector<uint32_t>
WitnessExtractor::embed(CircuitBuilder &b, std::span<const uint32_t> x) const {
  if (x.size() != d_->num_inputs())
    fail(ErrorCode::kStructural, "embed: input wiring has wrong width");
  std::vector<uint32_t> id(sources_.size(), 0);
  for (uint32_t j = 0; j < x.size(); ++j)
    id[x_var(j) - 1] = x[j];
  const auto &gates = d_->gates();
  for (uint32_t g = 0; g < gates.size(); ++g) {
    const Gate &gt = gates[g];
    uint32_t a = gt.op == Op::kInput ? 0 : id[gate_vars_[gt.a] - 1];
    uint32_t bb = id[gate_vars_[gt.b] - 1];
    uint32_t r;
    switch (gt.op) {
    case Op::kInput:
      continue;
    case Op::kAnd:
      r = b.land(a, bb);
      break;
    case Op::kOr:
      r = b.lor(a, bb);
      break;
    case Op::kXor:
      r = b.lxor(a, bb);
      break;
    case Op::kNot:
      r = b.lnot(a);
      break;
    case Op::kConst0:
      r = b.constant(false);
      break;
    default:
      r = b.constant(true);
      break;
    }
    id[gate_vars_[g] - 1] = r;
  }
  for (uint32_t i = 0; i < code_->cn(); ++i) {
    std::vector<uint32_t> u = code_->support(i);
    if (u.empty())
      id[i] = b.constant(false);
    else if (u.size() == 1)
      id[i] = x[u[0]];
  }
  for (const auto &chain : chains_)
    for (const auto &step : chain)
      id[step[2] - 1] = b.lxor(id[step[0] - 1], id[step[1] - 1]);
  return id;
}

namespace {

void xor_clauses(std::vector<Clause> &out, int32_t r, int32_t a, int32_t b) {
  // r = a XOR b
  out.push_back({-r, a, b});
  out.push_back({-r, -a, -b});
  out.push_back({r, -a, b});
  out.push_back({r, a, -b});
}

} // namespace

CspReduction sharpgap::circuit_to_csp(const Circuit &d, const LinearCode &code) {
  CspReduction red{{}, WitnessExtractor(d, code)};
  const WitnessExtractor &ex = red.extractor;
  CnfInstance &f = red.cnf;
  f.y_vars = code.cn();
  f.z_vars = ex.num_vars() - code.cn();
  auto &cl = f.clauses;
  const auto &gates = d.gates();
  for (uint32_t g = 0; g < gates.size(); ++g) {
    const Gate &gt = gates[g];
    if (gt.op == Op::kInput)
      continue;
    int32_t r = int32_t(ex.gate_var(g));
    int32_t a = op_arity(gt.op) >= 1 ? int32_t(ex.gate_var(gt.a)) : 0;
    int32_t b = op_arity(gt.op) == 2 ? int32_t(ex.gate_var(gt.b)) : 0;
    switch (gt.op) {
    case Op::kAnd:
      cl.push_back({-r, a});
      cl.push_back({-r, b});
      cl.push_back({r, -a, -b});
      break;
    case Op::kOr:
      cl.push_back({r, -a});
      cl.push_back({r, -b});
      cl.push_back({-r, a, b});
      break;
    case Op::kXor:
      xor_clauses(cl, r, a, b);
      break;
    case Op::kNot:
      cl.push_back({r, a});
      cl.push_back({-r, -a});
      break;
    case Op::kConst0:
      cl.push_back({-r});
      break;
    case Op::kConst1:
      cl.push_back({r});
      break;
    case Op::kInput:
      break;
    }
  }
  cl.push_back({-int32_t(ex.gate_var(d.output()))});
  for (uint32_t i = 0; i < code.cn(); ++i) {
    std::vector<uint32_t> u = code.support(i);
    int32_t y = int32_t(i + 1);
    if (u.empty()) {
      cl.push_back({-y});
    } else if (u.size() == 1) {
      int32_t xv = int32_t(ex.x_var(u[0]));
      cl.push_back({-y, xv});
      cl.push_back({y, -xv});
    } else {
      for (const auto &step : ex.chains_[i])
        xor_clauses(cl, int32_t(step[2]), int32_t(step[0]), int32_t(step[1]));
    }
  }
  f.set_singleton_groups();
  f.validate();
  return red;
}

//===----------------------------------------------------------------------===//
// Serial repetition
//===----------------------------------------------------------------------===//

CnfInstance sharpgap::serial_repeat(const CnfInstance &f, uint32_t k,
                                    const RepeatMode &mode) {
  if (k < 1)
    fail(ErrorCode::kInvalidArgument, "serial_repeat: k must be >= 1");
  f.validate();
  const uint64_t m = f.groups.size();
  if (m == 0)
    fail(ErrorCode::kInvalidArgument, "serial_repeat: instance has no groups");

  CnfInstance out;
  out.y_vars = f.y_vars;
  out.z_vars = f.z_vars;
  std::vector<uint32_t> tuple(k, 0);
  std::vector<uint32_t> members;
  auto emit = [&] {
    members.clear();
    for (uint32_t g : tuple)
      for (uint32_t ci : f.groups[g])
        if (std::find(members.begin(), members.end(), ci) == members.end())
          members.push_back(ci);
    std::vector<uint32_t> ids;
    for (uint32_t ci : members) {
      ids.push_back(uint32_t(out.clauses.size()));
      out.clauses.push_back(f.clauses[ci]);
    }
    out.groups.push_back(std::move(ids));
  };

  if (mode.kind == RepeatMode::kAllTuples) {
    uint64_t total = 1;
    for (uint32_t r = 0; r < k; ++r) {
      if (total > mode.budget / m + 1)
        total = mode.budget + 1;
      else
        total *= m;
    }
    if (total > mode.budget)
      fail(ErrorCode::kBudget, "all-tuples repetition needs " +
                                   std::to_string(m) + "^" + std::to_string(k) +
                                   " groups, budget " +
                                   std::to_string(mode.budget));
    for (uint64_t idx = 0; idx < total; ++idx) {
      emit();
      for (int p = int(k) - 1; p >= 0; --p) {
        if (++tuple[p] < m)
          break;
        tuple[p] = 0;
      }
    }
  } else {
    if (mode.count == 0)
      fail(ErrorCode::kInvalidArgument, "sampled repetition needs count >= 1");
    SplitMix64 rng(mode.seed);
    for (uint64_t s = 0; s < mode.count; ++s) {
      for (uint32_t p = 0; p < k; ++p)
        tuple[p] = uint32_t(rng.below(m));
      emit();
    }
  }
  return out;
}

//===----------------------------------------------------------------------===//
// Max satisfiable groups
//===----------------------------------------------------------------------===//

size_t sharpgap::maxsat(const CnfInstance &f, const PartialAssignment &tau,
                        uint32_t budget) {
  f.validate();
  uint32_t nv = f.num_vars();
  if (!tau.empty() && tau.size() != nv)
    fail(ErrorCode::kStructural, "partial assignment width differs");
  auto fixed = [&](uint32_t v) -> int { return tau.empty() ? -1 : tau[v - 1]; };

  std::vector<int32_t> slot(nv + 1, -1);
  uint32_t free_count = 0;
  for (const Clause &c : f.clauses)
    for (int32_t lit : c) {
      uint32_t v = uint32_t(std::abs(lit));
      if (fixed(v) < 0 && slot[v] < 0)
        slot[v] = int32_t(free_count++);
    }
  if (free_count > budget || free_count > 40)
    fail(ErrorCode::kBudget, "maxsat: " + std::to_string(free_count) +
                                 " free variables exceed budget " +
                                 std::to_string(budget));

  struct Masks {
    uint64_t pos = 0, neg = 0;
    bool sat = false;
  };
  std::vector<Masks> masks(f.clauses.size());
  for (size_t i = 0; i < f.clauses.size(); ++i)
    for (int32_t lit : f.clauses[i]) {
      uint32_t v = uint32_t(std::abs(lit));
      int val = fixed(v);
      if (val >= 0) {
        masks[i].sat |= (lit > 0) == (val == 1);
      } else if (lit > 0) {
        masks[i].pos |= uint64_t(1) << slot[v];
      } else {
        masks[i].neg |= uint64_t(1) << slot[v];
      }
    }

  size_t best = 0;
  for (uint64_t a = 0; a < (uint64_t(1) << free_count); ++a) {
    size_t count = 0;
    for (const auto &g : f.groups) {
      bool ok = true;
      for (uint32_t ci : g) {
        const Masks &mk = masks[ci];
        if (!mk.sat && !(a & mk.pos) && !(~a & mk.neg)) {
          ok = false;
          break;
        }
      }
      count += ok;
    }
    best = std::max(best, count);
    if (best == f.groups.size())
      break;
  }
  return best;
}

//===----------------------------------------------------------------------===//
// DIMACS
//===----------------------------------------------------------------------===//

std::string sharpgap::format_dimacs(const CnfInstance &f) {
  std::ostringstream os;
  os << "c ypart " << f.y_vars << '\n';
  for (size_t g = 0; g < f.groups.size(); ++g) {
    os << "c group " << g;
    for (uint32_t ci : f.groups[g])
      os << ' ' << ci;
    os << '\n';
  }
  os << "p cnf " << f.num_vars() << ' ' << f.clauses.size() << '\n';
  for (const Clause &c : f.clauses) {
    for (int32_t lit : c)
      os << lit << ' ';
    os << "0\n";
  }
  return os.str();
}

CnfInstance sharpgap::parse_dimacs(const std::string &text) {
  std::istringstream is(text);
  std::string line;
  size_t line_no = 0;
  auto bad = [&](const std::string &msg) {
    fail(ErrorCode::kParse,
         "dimacs line " + std::to_string(line_no) + ": " + msg);
  };
  CnfInstance f;
  bool have_header = false, have_groups = false;
  uint64_t nv = 0, nc = 0;
  Clause current;
  std::vector<std::pair<uint64_t, std::vector<uint32_t>>> groups;
  while (std::getline(is, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok))
      continue;
    if (tok == "c") {
      std::string kind;
      ls >> kind;
      if (kind == "ypart") {
        if (!(ls >> f.y_vars))
          bad("bad ypart line");
      } else if (kind == "group") {
        uint64_t gid;
        if (!(ls >> gid))
          bad("bad group line");
        std::vector<uint32_t> members;
        for (int64_t ci; ls >> ci;) {
          if (ci < 0)
            bad("negative clause index");
          members.push_back(uint32_t(ci));
        }
        if (!ls.eof())
          bad("bad group member");
        groups.emplace_back(gid, std::move(members));
        have_groups = true;
      }
      continue;
    }
    if (tok == "p") {
      std::string fmt;
      if (have_header || !(ls >> fmt >> nv >> nc) || fmt != "cnf")
        bad("expected a single 'p cnf <vars> <clauses>'");
      if (nv > (1u << 28) || nc > (1u << 28))
        bad("instance too large");
      have_header = true;
      continue;
    }
    if (!have_header)
      bad("clause before 'p cnf' header");
    ls.clear();
    ls.str(line);
    for (int64_t lit; ls >> lit;) {
      if (lit == 0) {
        f.clauses.push_back(std::move(current));
        current.clear();
      } else {
        if (uint64_t(std::abs(lit)) > nv)
          bad("literal " + std::to_string(lit) + " exceeds variable count");
        current.push_back(int32_t(lit));
      }
    }
    if (!ls.eof())
      bad("non-numeric token in clause");
  }
  if (!have_header)
    fail(ErrorCode::kParse, "dimacs: missing 'p cnf' header");
  if (!current.empty())
    fail(ErrorCode::kParse, "dimacs: last clause lacks terminating 0");
  if (f.clauses.size() != nc)
    fail(ErrorCode::kParse, "dimacs: header declares " + std::to_string(nc) +
                                " clauses, found " +
                                std::to_string(f.clauses.size()));
  if (f.y_vars > nv)
    fail(ErrorCode::kParse, "dimacs: ypart exceeds variable count");
  f.z_vars = uint32_t(nv) - f.y_vars;
  if (have_groups) {
    std::sort(groups.begin(), groups.end(),
              [](auto &a, auto &b) { return a.first < b.first; });
    for (size_t g = 0; g < groups.size(); ++g) {
      if (groups[g].first != g)
        fail(ErrorCode::kParse, "dimacs: group ids must be 0..G-1");
      f.groups.push_back(std::move(groups[g].second));
    }
  } else {
    f.set_singleton_groups();
  }
  try {
    f.validate();
  } catch (const Error &e) {
    fail(ErrorCode::kParse, std::string("dimacs: ") + e.what());
  }
  return f;
}
