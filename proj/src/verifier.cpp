// SPDX-License-Identifier: Apache-2.0
#include "sharpgap/verifier.hpp"
#include "sharpgap/error.hpp"
#include "sharpgap/rng.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <sstream>

using namespace sharpgap;

//===----------------------------------------------------------------------===//
// Parameter planning
//===----------------------------------------------------------------------===//

bool ParameterPlan::separation_holds() const {
  BigInt h = this->h();
  BigInt lhs = BigInt(safety) * t * (BigInt(kappa) * g + BigInt(n2) * h);
  return lhs < BigInt(kappa) * h * g;
}

std::string ParameterPlan::describe() const {
  std::ostringstream os;
  os << "m=" << m << " k=" << k << " k'=" << k_prime << " g=" << g
     << " h=" << to_decimal(h()) << " kappa=" << kappa << " t=" << t
     << " n2=" << n2 << " safety=" << safety;
  return os.str();
}

ParameterPlan sharpgap::plan_parameters(uint64_t m, uint64_t kappa, uint32_t t,
                                        uint64_t n2, const PlanBudget &budget) {
  if (kappa == 0)
    fail(ErrorCode::kPlanning, "plan: kappa must be positive");
  if (t == 0)
    fail(ErrorCode::kPlanning, "plan: witness width must be positive");
  ParameterPlan p;
  p.m = m;
  p.kappa = kappa;
  p.t = t;
  p.n2 = n2;
  for (uint32_t k = 1; k <= budget.max_k; ++k) {
    p.k = k;
    // kappa h g > s t (kappa g + n2 h) needs h > s t before any g works.
    if (p.h() <= BigInt(p.safety) * t)
      continue;
    for (uint32_t lg = 1; lg <= budget.max_log_g; ++lg) {
      p.g = uint64_t(1) << lg;
      if (p.separation_holds()) {
        p.k_prime = uint64_t(std::ceil(double(k) * double(m) * std::log(2.0)));
        return p;
      }
    }
  }
  fail(ErrorCode::kPlanning,
       "no (k, g) within k <= " + std::to_string(budget.max_k) +
           ", g <= 2^" + std::to_string(budget.max_log_g) +
           " separates kappa=" + std::to_string(kappa) +
           " t=" + std::to_string(t) + " n2=" + std::to_string(n2));
}

//===----------------------------------------------------------------------===//
// Pipeline
//===----------------------------------------------------------------------===//

static uint32_t ceil_log2(uint64_t v) {
  uint32_t l = 0;
  while ((uint64_t(1) << l) < v)
    ++l;
  return l;
}

template <typename F> static auto stage(const char *name, F &&f) {
  try {
    return f();
  } catch (const Error &e) {
    fail(e.code(), std::string(name) + ": " + e.what());
  }
}

Pipeline sharpgap::build_pipeline(const Circuit &d_prime,
                                  const PipelineProfile &profile) {
  HittingParams hp;
  hp.psi = profile.psi;
  hp.t = profile.walk_t;
  hp.max_lambda = profile.max_lambda;
  hp.seed = profile.hit_seed;
  AmplifiedCircuit amp =
      stage("amplify", [&] { return amplify_gap(d_prime, profile.g, hp); });
  LinearCode code = stage("code", [&] {
    CodeParams cp;
    cp.c = profile.code_c;
    return build_code(amp.n, profile.code_seed, cp);
  });
  CspReduction base =
      stage("reduce", [&] { return circuit_to_csp(amp.circuit, code); });
  CnfInstance repeated = stage("repeat", [&] {
    return serial_repeat(base.cnf, profile.repeat_k, profile.repeat_mode);
  });
  GisInstance gis = stage("fglss", [&] { return fglss_build(repeated); });
  ParameterPlan plan = stage("plan", [&] {
    return plan_parameters(base.cnf.clauses.size(), gis.num_groups,
                           profile.plan_t, gis.num_vertices());
  });
  uint32_t width = std::max<uint32_t>(1, ceil_log2(gis.num_vertices()));
  return Pipeline{profile,          d_prime,           std::move(amp),
                  std::move(code),  std::move(base),   std::move(repeated),
                  std::move(gis),   plan,              width};
}

//===----------------------------------------------------------------------===//
// Witnesses
//===----------------------------------------------------------------------===//

uint64_t sharpgap::witness_width(const EmajCircuit &u) {
  uint64_t t = u.t();
  uint64_t w = std::max<uint64_t>(u.u, t > u.u ? t - u.u : 0);
  return w * w;
}

namespace {

/// Builder over (x, i) whose index inputs and their negations take the
/// smallest gate ids, so restrictions resolve the multiplexer selectors
/// before touching any leaf.
struct IndexedBuilder {
  CircuitBuilder b;
  std::vector<uint32_t> x, idx;

  IndexedBuilder(uint32_t n, uint32_t width) : b(n + width) {
    for (uint32_t k = 0; k < width; ++k) {
      idx.push_back(b.input(n + k));
      b.lnot(idx.back());
    }
    for (uint32_t j = 0; j < n; ++j)
      x.push_back(b.input(j));
  }

  uint32_t index_equals(uint64_t v) {
    std::vector<uint32_t> lits;
    for (uint32_t k = 0; k < idx.size(); ++k)
      lits.push_back((v >> k) & 1 ? idx[k] : b.lnot(idx[k]));
    return b.land_all(lits);
  }

  /// [i < bound] over the index bits.
  uint32_t index_below(uint64_t bound) {
    if (idx.size() < 64 && bound >= (uint64_t(1) << idx.size()))
      return b.constant(true);
    uint32_t lt = b.constant(false);
    for (uint32_t k = 0; k < idx.size(); ++k) {
      uint32_t z = b.lnot(idx[k]);
      lt = (bound >> k) & 1 ? b.lor(z, lt) : b.land(z, lt);
    }
    return lt;
  }

  uint32_t mux_tree(std::vector<uint32_t> level) {
    level.resize(size_t(1) << idx.size(), b.constant(false));
    for (uint32_t k = 0; k < idx.size(); ++k) {
      std::vector<uint32_t> up(level.size() / 2);
      for (size_t v = 0; v < up.size(); ++v)
        up[v] = b.mux(idx[k], level[2 * v + 1], level[2 * v]);
      level.swap(up);
    }
    return level[0];
  }
};

uint32_t selection_node(const Pipeline &p, IndexedBuilder &ib) {
  std::vector<uint32_t> vars = p.base.extractor.embed(ib.b, ib.x);
  std::vector<uint32_t> leaves;
  leaves.reserve(p.n2());
  std::vector<uint32_t> lits;
  for (const GisVertex &v : p.gis.vertices) {
    lits.clear();
    for (auto [var, bit] : v.assignment) {
      uint32_t id = vars[var - 1];
      lits.push_back(bit ? id : ib.b.lnot(id));
    }
    leaves.push_back(ib.b.land_all(lits));
  }
  return ib.mux_tree(std::move(leaves));
}

EmajCircuit wrap_negated(const Circuit &a, uint32_t t) {
  Circuit c = negate(a);
  EmajCircuit u;
  u.num_inputs = a.num_inputs();
  u.u = 1;
  if (t <= 1) {
    u.subcircuits.push_back(c);
    return u;
  }
  Circuit x1 = projection(a.num_inputs(), 0);
  u.subcircuits.push_back(and2(c, x1));
  u.subcircuits.push_back(and2(c, negate(x1)));
  for (uint32_t k = 2; k < t; ++k)
    u.subcircuits.push_back(all_zeros(a.num_inputs()));
  return u;
}

} // namespace

Circuit sharpgap::honest_selection(const Pipeline &p) {
  IndexedBuilder ib(p.n(), p.index_width);
  return ib.b.build(selection_node(p, ib));
}

Witness sharpgap::witness_from_emaj(EmajCircuit u) {
  u.validate();
  SumCircuit r = emaj_to_sum(u);
  return Witness{std::move(u), std::move(r)};
}

Witness sharpgap::build_honest_witness(const Pipeline &p) {
  return witness_from_emaj(
      wrap_negated(honest_selection(p), p.profile.witness_t));
}

//===----------------------------------------------------------------------===//
// Verification phases
//===----------------------------------------------------------------------===//

TermRestrictions::TermRestrictions(const SumCircuit &r, uint32_t index_width,
                                   uint64_t n2)
    : width_(index_width), n2_(n2), mask_([&] {
        uint32_t n = r.num_inputs >= index_width ? r.num_inputs - index_width
                                                 : 0;
        IndexedBuilder ib(n, index_width);
        return ib.b.build(ib.index_below(n2));
      }()) {
  if (r.num_inputs < index_width)
    fail(ErrorCode::kStructural, "sum circuit narrower than the index");
  // Terms emitted as repeated copies share storage; restrict each once.
  std::map<std::pair<const void *, uint32_t>, size_t> unique;
  for (const SumTerm &term : r.terms) {
    if (term.circuit.num_inputs() != r.num_inputs)
      fail(ErrorCode::kStructural, "sum term arity mismatch");
    auto key = std::make_pair(static_cast<const void *>(&term.circuit.gates()),
                              term.circuit.output());
    auto [it, fresh] = unique.emplace(key, restrictors_.size());
    if (fresh)
      restrictors_.emplace_back(term.circuit);
    slot_.push_back(it->second);
    signs_.push_back(term.sign);
  }
  cache_.assign(restrictors_.size(),
                std::vector<std::optional<Circuit>>(n2));
}

const Circuit &TermRestrictions::get(size_t term, uint64_t vertex) {
  if (vertex >= n2_)
    fail(ErrorCode::kOutOfRange, "vertex index out of range");
  size_t s = slot_[term];
  auto &entry = cache_[s][vertex];
  if (!entry)
    entry = and2(restrictors_[s].fix_trailing(width_, vertex),
                 mask_.fix_trailing(width_, vertex));
  return *entry;
}

BigInt sharpgap::verify_independence(TermRestrictions &terms,
                                     const GisInstance &g,
                                     CountingOracle &oracle) {
  BigInt total = 0;
  size_t t = terms.num_terms();
  for (auto [a, b] : g.edges)
    for (size_t j1 = 0; j1 < t; ++j1)
      for (size_t j2 = 0; j2 < t; ++j2) {
        BigInt c = oracle.count(and2(terms.get(j1, a), terms.get(j2, b)));
        if (terms.sign(j1) * terms.sign(j2) > 0)
          total += c;
        else
          total -= c;
      }
  return total;
}

BigInt sharpgap::verify_consistency(TermRestrictions &terms,
                                    const GisInstance &g,
                                    const LinearCode &code,
                                    CountingOracle &oracle) {
  // (ENC_j XOR b) for both b, built on first use.
  std::vector<std::array<std::optional<Circuit>, 2>> mismatch(code.cn());
  BigInt total = 0;
  size_t t = terms.num_terms();
  for (uint32_t i = 0; i < g.num_vertices(); ++i)
    for (auto [jp, bit] : g.vertices[i].s_pairs) {
      auto &m = mismatch.at(jp)[bit & 1];
      if (!m)
        m = xor_const(component(code, jp), bit & 1);
      for (size_t j = 0; j < t; ++j) {
        BigInt c = oracle.count(and2(*m, terms.get(j, i)));
        if (terms.sign(j) > 0)
          total += c;
        else
          total -= c;
      }
    }
  return total;
}

BigInt sharpgap::final_sum(TermRestrictions &terms, const GisInstance &g,
                           CountingOracle &oracle) {
  BigInt total = 0;
  for (size_t j = 0; j < terms.num_terms(); ++j)
    for (uint32_t i = 0; i < g.num_vertices(); ++i) {
      BigInt c = oracle.count(terms.get(j, i));
      if (terms.sign(j) > 0)
        total += c;
      else
        total -= c;
    }
  if (total < 0)
    fail(ErrorCode::kPromiseViolation,
         "final sum " + to_decimal(total) + " is negative");
  return total;
}

//===----------------------------------------------------------------------===//
// Decision
//===----------------------------------------------------------------------===//

const char *sharpgap::to_string(Decision d) {
  return d == Decision::kUnsatVerified ? "UNSAT-VERIFIED" : "REJECT";
}

std::string Verdict::to_json() const {
  using nlohmann::json;
  auto big = [](const std::optional<BigInt> &v) -> json {
    return v ? json(to_decimal(*v)) : json(nullptr);
  };
  json j;
  j["decision"] = sharpgap::to_string(decision);
  j["reason"] = reason;
  j["witness"] = {{"width", witness_width}, {"terms", witness_terms}};
  j["phases"] = {{"independence", big(independence)},
                 {"consistency", big(consistency)},
                 {"final", big(final_total)},
                 {"threshold", to_decimal(threshold)}};
  j["oracle_calls"] = {{"independence", calls_independence},
                       {"consistency", calls_consistency},
                       {"final", calls_final}};
  j["instance"] = {{"n", n},         {"kappa", kappa},
                   {"n2", n2},       {"edges", edges},
                   {"m", base_clauses}};
  j["plan"] = {{"m", plan.m},         {"k", plan.k},
               {"k_prime", plan.k_prime}, {"g", plan.g},
               {"h", to_decimal(plan.h())}, {"kappa", plan.kappa},
               {"t", plan.t},         {"n2", plan.n2},
               {"safety", plan.safety}, {"holds", plan.separation_holds()}};
  j["realized"] = {{"g", realized_g}, {"k_prime", realized_k_prime}};
  j["separation_certified"] = separation_certified;
  return j.dump(2);
}

Verdict sharpgap::verify_witness(const Pipeline &p, const EmajCircuit &u,
                                 CountingOracle &oracle,
                                 const VerifyOptions &opts) {
  Verdict v;
  v.plan = p.plan;
  v.n = p.n();
  v.kappa = p.kappa();
  v.n2 = p.n2();
  v.edges = p.gis.edges.size();
  v.base_clauses = p.base.cnf.clauses.size();
  v.realized_g = p.profile.g;
  v.realized_k_prime = p.profile.repeat_k;
  v.separation_certified = p.profile.g >= p.plan.g &&
                           p.profile.repeat_k >= p.plan.k_prime;
  v.threshold = pow2(p.n()) * p.kappa();

  if (u.num_inputs != p.n() + p.index_width) {
    v.reason = "witness has " + std::to_string(u.num_inputs) +
               " inputs, expected " + std::to_string(p.n() + p.index_width);
    return v;
  }
  try {
    u.validate();
  } catch (const Error &e) {
    v.reason = std::string("malformed witness: ") + e.what();
    return v;
  }
  v.witness_width = witness_width(u);
  if (v.witness_width > p.profile.plan_t) {
    v.reason = "witness width " + std::to_string(v.witness_width) +
               " exceeds the planned t=" + std::to_string(p.profile.plan_t);
    return v;
  }
  SumCircuit r = emaj_to_sum(u);
  v.witness_terms = r.terms.size();
  TermRestrictions terms(r, p.index_width, p.n2());

  try {
    oracle.reset_calls();
    v.independence = verify_independence(terms, p.gis, oracle);
    v.calls_independence = oracle.calls();
    if (*v.independence != 0 && opts.stop_at_first_failure) {
      v.reason = "independence check failed";
      return v;
    }
    oracle.reset_calls();
    v.consistency = verify_consistency(terms, p.gis, p.code, oracle);
    v.calls_consistency = oracle.calls();
    if (*v.consistency != 0 && opts.stop_at_first_failure) {
      v.reason = "consistency check failed";
      return v;
    }
    oracle.reset_calls();
    v.final_total = final_sum(terms, p.gis, oracle);
    v.calls_final = oracle.calls();
  } catch (const Error &e) {
    if (e.code() != ErrorCode::kPromiseViolation)
      throw;
    v.reason = e.what();
    return v;
  }
  if (*v.independence != 0)
    v.reason = "independence check failed";
  else if (*v.consistency != 0)
    v.reason = "consistency check failed";
  else if (*v.final_total < v.threshold)
    v.reason = "final sum below 2^n * kappa";
  else
    v.decision = Decision::kUnsatVerified;
  return v;
}

Verdict sharpgap::run_e2e_prove(const Circuit &d_prime,
                                const PipelineProfile &profile,
                                const VerifyOptions &opts) {
  Pipeline p = build_pipeline(d_prime, profile);
  Witness w = stage("witness", [&] { return build_honest_witness(p); });
  ExhaustiveOracle oracle(profile.count_budget);
  return stage("verify", [&] { return verify_witness(p, w.u, oracle, opts); });
}

Verdict sharpgap::run_e2e_verify(const Circuit &d_prime,
                                 const PipelineProfile &profile,
                                 const EmajCircuit &u,
                                 const VerifyOptions &opts) {
  Pipeline p = build_pipeline(d_prime, profile);
  ExhaustiveOracle oracle(profile.count_budget);
  return stage("verify", [&] { return verify_witness(p, u, oracle, opts); });
}

//===----------------------------------------------------------------------===//
// Witness files
//===----------------------------------------------------------------------===//

bool sharpgap::profile_set(PipelineProfile &f, const std::string &key,
                           const std::string &val) {
  auto num = [&]() -> uint64_t {
    if (val.empty() || val.size() > 19 ||
        val.find_first_not_of("0123456789") != std::string::npos)
      fail(ErrorCode::kInvalidArgument, "bad value '" + val + "' for " + key);
    return std::stoull(val);
  };
  auto num32 = [&]() {
    uint64_t v = num();
    if (v > UINT32_MAX)
      fail(ErrorCode::kInvalidArgument, key + " out of range");
    return uint32_t(v);
  };
  if (key == "g") f.g = num32();
  else if (key == "psi") f.psi = num32();
  else if (key == "walk_t") f.walk_t = num32();
  else if (key == "max_lambda") {
    char *end = nullptr;
    double v = std::strtod(val.c_str(), &end);
    if (val.empty() || *end != '\0' || !(v > 0))
      fail(ErrorCode::kInvalidArgument, "bad value '" + val + "' for max_lambda");
    f.max_lambda = v;
  }
  else if (key == "hit_seed") f.hit_seed = num();
  else if (key == "code_c") f.code_c = num32();
  else if (key == "code_seed") f.code_seed = num();
  else if (key == "repeat_k") f.repeat_k = num32();
  else if (key == "repeat_mode") {
    if (val == "all")
      f.repeat_mode.kind = RepeatMode::kAllTuples;
    else if (val == "sampled")
      f.repeat_mode.kind = RepeatMode::kSampled;
    else
      fail(ErrorCode::kInvalidArgument, "repeat_mode must be all or sampled");
  }
  else if (key == "repeat_seed") f.repeat_mode.seed = num();
  else if (key == "repeat_count") f.repeat_mode.count = num();
  else if (key == "repeat_budget") f.repeat_mode.budget = num();
  else if (key == "witness_t") f.witness_t = num32();
  else if (key == "plan_t") f.plan_t = num32();
  else if (key == "count_budget") f.count_budget = num32();
  else return false;
  return true;
}

std::string sharpgap::format_witness_file(const Pipeline &p,
                                          const EmajCircuit &u) {
  const PipelineProfile &f = p.profile;
  char lambda[32];
  std::snprintf(lambda, sizeof lambda, "%.17g", f.max_lambda);
  std::ostringstream os;
  os << "# plan g=" << f.g << " psi=" << f.psi << " walk_t=" << f.walk_t
     << " max_lambda=" << lambda << " hit_seed=" << f.hit_seed << '\n';
  os << "# plan code_c=" << f.code_c << " code_seed=" << f.code_seed
     << " repeat_k=" << f.repeat_k << " repeat_mode="
     << (f.repeat_mode.kind == RepeatMode::kAllTuples ? "all" : "sampled")
     << " repeat_seed=" << f.repeat_mode.seed
     << " repeat_count=" << f.repeat_mode.count
     << " repeat_budget=" << f.repeat_mode.budget << '\n';
  os << "# plan witness_t=" << f.witness_t << " plan_t=" << f.plan_t
     << " count_budget=" << f.count_budget << '\n';
  os << "# plan n=" << p.n() << " kappa=" << p.kappa() << " n2=" << p.n2()
     << " index_width=" << p.index_width << '\n';
  write_emaj(os, u);
  return os.str();
}

WitnessFile sharpgap::parse_witness_file(const std::string &text) {
  WitnessFile w;
  std::istringstream is(text);
  std::string line;
  size_t line_no = 0;
  auto bad = [&](const std::string &msg) {
    fail(ErrorCode::kParse,
         "witness line " + std::to_string(line_no) + ": " + msg);
  };
  while (std::getline(is, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string hash, tag;
    ls >> hash >> tag;
    if (hash != "#" || tag != "plan")
      continue;
    for (std::string kv; ls >> kv;) {
      size_t eq = kv.find('=');
      if (eq == std::string::npos)
        bad("expected key=value, got '" + kv + "'");
      std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
      auto num = [&]() -> uint64_t {
        if (val.empty() || val.size() > 19 ||
            val.find_first_not_of("0123456789") != std::string::npos)
          bad("bad value for " + key);
        return std::stoull(val);
      };
      if (key == "n") w.n = uint32_t(num());
      else if (key == "kappa") w.kappa = num();
      else if (key == "n2") w.n2 = num();
      else if (key == "index_width") w.index_width = uint32_t(num());
      else {
        try {
          if (!profile_set(w.profile, key, val))
            bad("unknown plan key '" + key + "'");
        } catch (const Error &e) {
          if (e.code() != ErrorCode::kInvalidArgument)
            throw;
          bad(e.what());
        }
      }
    }
  }
  w.u = parse_emaj(text);
  return w;
}

Verdict sharpgap::verify_witness_file(const Circuit &d_prime,
                                      const std::string &text,
                                      const VerifyOptions &opts) {
  WitnessFile w = parse_witness_file(text);
  Pipeline p = build_pipeline(d_prime, w.profile);
  auto check = [](const char *what, uint64_t echoed, uint64_t actual) {
    if (echoed != actual)
      fail(ErrorCode::kInvalidWitness,
           std::string("witness plan echoes ") + what + "=" +
               std::to_string(echoed) + " but the pipeline gives " +
               std::to_string(actual));
  };
  check("n", w.n, p.n());
  check("kappa", w.kappa, p.kappa());
  check("n2", w.n2, p.n2());
  check("index_width", w.index_width, p.index_width);
  ExhaustiveOracle oracle(w.profile.count_budget);
  return verify_witness(p, w.u, oracle, opts);
}

//===----------------------------------------------------------------------===//
// Perturbed witnesses
//===----------------------------------------------------------------------===//

namespace {

/// Copy of c with gate `target`'s value inverted for all its consumers.
Circuit negate_gate(const Circuit &c, uint32_t target) {
  CircuitBuilder b(c.num_inputs());
  const auto &gates = c.gates();
  std::vector<uint32_t> id(gates.size());
  for (uint32_t g = 0; g < gates.size(); ++g) {
    const Gate &gt = gates[g];
    uint32_t r;
    switch (gt.op) {
    case Op::kInput: r = b.input(gt.a); break;
    case Op::kConst0: r = b.constant(false); break;
    case Op::kConst1: r = b.constant(true); break;
    case Op::kNot: r = b.lnot(id[gt.a]); break;
    case Op::kAnd: r = b.land(id[gt.a], id[gt.b]); break;
    case Op::kOr: r = b.lor(id[gt.a], id[gt.b]); break;
    default: r = b.lxor(id[gt.a], id[gt.b]); break;
    }
    id[g] = g == target ? b.lnot(r) : r;
  }
  return b.build(id[c.output()]);
}

/// Vertices whose group contains the base instance's output unit clause.
std::vector<uint32_t> output_clause_vertices(const Pipeline &p) {
  const Circuit &d = p.d();
  int32_t lit = -int32_t(p.base.extractor.gate_var(d.output()));
  std::vector<uint8_t> hit(p.repeated.num_groups(), 0);
  for (size_t gi = 0; gi < p.repeated.groups.size(); ++gi)
    for (uint32_t ci : p.repeated.groups[gi]) {
      const Clause &cl = p.repeated.clauses[ci];
      if (cl.size() == 1 && cl[0] == lit)
        hit[gi] = 1;
    }
  std::vector<uint32_t> out;
  for (uint32_t v = 0; v < p.n2(); ++v)
    if (hit[p.gis.vertices[v].group])
      out.push_back(v);
  return out;
}

} // namespace

std::vector<Mutant> sharpgap::witness_mutations(const Pipeline &p,
                                                uint64_t seed, size_t count) {
  const uint32_t n = p.n(), w = p.index_width;
  const uint64_t n2 = p.n2();
  Circuit a = honest_selection(p);
  std::vector<uint32_t> out_vertices = output_clause_vertices(p);
  SplitMix64 rng(seed);
  auto pick_vertex = [&] { return n2 ? rng.below(n2) : 0; };

  // Builds A' = op(A, extra) where extra is made in an IndexedBuilder.
  auto edit = [&](auto &&make) {
    IndexedBuilder ib(n, w);
    std::vector<uint32_t> wiring(ib.x);
    wiring.insert(wiring.end(), ib.idx.begin(), ib.idx.end());
    uint32_t base = ib.b.embed(a, wiring);
    return ib.b.build(make(ib, base));
  };

  std::vector<Mutant> out;
  auto emit = [&](std::string name, EmajCircuit u) {
    out.push_back({std::move(name), std::move(u)});
  };
  for (size_t k = 0; out.size() < count; ++k) {
    switch (k % 10) {
    case 0: {
      EmajCircuit u;
      u.num_inputs = n + w;
      u.u = 1;
      u.subcircuits.push_back(a);
      emit("negated-selection", u);
      break;
    }
    case 1: {
      uint64_t v = pick_vertex();
      emit("add-vertex-" + std::to_string(v),
           wrap_negated(edit([&](IndexedBuilder &ib, uint32_t base) {
                          return ib.b.lor(base, ib.index_equals(v));
                        }),
                        1));
      break;
    }
    case 2: {
      uint64_t v = out_vertices.empty() ? pick_vertex()
                                        : out_vertices[rng.below(out_vertices.size())];
      emit("add-output-clause-vertex-" + std::to_string(v),
           wrap_negated(edit([&](IndexedBuilder &ib, uint32_t base) {
                          return ib.b.lor(base, ib.index_equals(v));
                        }),
                        1));
      break;
    }
    case 3: {
      uint64_t v = pick_vertex();
      emit("drop-vertex-" + std::to_string(v),
           wrap_negated(edit([&](IndexedBuilder &ib, uint32_t base) {
                          return ib.b.land(base, ib.b.lnot(ib.index_equals(v)));
                        }),
                        1));
      break;
    }
    case 4: {
      uint64_t v = pick_vertex();
      uint32_t j = uint32_t(rng.below(n));
      emit("flip-vertex-" + std::to_string(v) + "-on-x" + std::to_string(j + 1),
           wrap_negated(edit([&](IndexedBuilder &ib, uint32_t base) {
                          return ib.b.lxor(
                              base, ib.b.land(ib.index_equals(v), ib.x[j]));
                        }),
                        1));
      break;
    }
    case 5: {
      EmajCircuit u;
      u.num_inputs = n + w;
      u.u = 0;
      Circuit c = negate(a);
      u.subcircuits.assign(3, c);
      emit("amplitude-3", u);
      break;
    }
    case 6:
      emit("splitter-2", wrap_negated(a, 2));
      break;
    case 7:
    case 8: {
      uint32_t g = uint32_t(rng.below(a.size()));
      emit("negate-gate-" + std::to_string(g), wrap_negated(negate_gate(a, g), 1));
      break;
    }
    default: {
      uint32_t j = uint32_t(rng.below(n));
      emit("foreign-input-x" + std::to_string(j + 1),
           wrap_negated(edit([&](IndexedBuilder &ib, uint32_t) {
                          std::vector<uint32_t> wiring(ib.x);
                          wiring[j] = ib.b.lnot(wiring[j]);
                          wiring.insert(wiring.end(), ib.idx.begin(),
                                        ib.idx.end());
                          return ib.b.embed(a, wiring);
                        }),
                        1));
      break;
    }
    }
  }
  return out;
}
