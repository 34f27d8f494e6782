// SPDX-License-Identifier: Apache-2.0
#include "sharpgap/selftest.hpp"
#include "sharpgap/error.hpp"
#include "sharpgap/rng.hpp"
#include "sharpgap/verifier.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

using namespace sharpgap;

namespace {

Circuit random_circuit(SplitMix64 &rng, uint32_t n, uint32_t gates) {
  std::vector<Gate> g;
  for (uint32_t j = 0; j < n; ++j)
    g.push_back({Op::kInput, j, 0});
  if (n == 0)
    g.push_back({Op::kConst0, 0, 0});
  for (uint32_t k = 0; k < gates; ++k) {
    uint32_t a = uint32_t(rng.below(g.size()));
    uint32_t b = uint32_t(rng.below(g.size()));
    switch (rng.below(5)) {
    case 0: g.push_back({Op::kAnd, a, b}); break;
    case 1: g.push_back({Op::kOr, a, b}); break;
    case 2: g.push_back({Op::kXor, a, b}); break;
    case 3: g.push_back({Op::kNot, a, 0}); break;
    default: g.push_back({Op::kAnd, a, uint32_t(g.size() - 1)}); break;
    }
  }
  return Circuit(n, std::move(g), uint32_t(g.size() - 1));
}

struct Runner {
  std::ostringstream os;
  bool ok = true;

  void check(const char *name, const std::function<std::string()> &body) {
    std::string detail;
    try {
      detail = body();
    } catch (const std::exception &e) {
      detail = std::string("exception: ") + e.what();
    }
    if (detail.empty()) {
      os << "PASS " << name << '\n';
    } else {
      ok = false;
      os << "FAIL " << name << ": " << detail << '\n';
    }
  }
};

} // namespace

SelftestResult sharpgap::run_selftest(uint64_t seed) {
  Runner r;
  SplitMix64 rng(seed);

  r.check("count-bitsliced-vs-naive", [&]() -> std::string {
    for (int it = 0; it < 100; ++it) {
      Circuit c = random_circuit(rng, uint32_t(rng.below(11)), 12);
      if (count_sat(c).count != count_sat_naive(c))
        return "mismatch on\n" + format_netlist(c);
    }
    return "";
  });

  r.check("netlist-roundtrip", [&]() -> std::string {
    for (int it = 0; it < 50; ++it) {
      Circuit c = random_circuit(rng, 1 + uint32_t(rng.below(6)), 10);
      if (!(parse_netlist(format_netlist(c)) == c))
        return "roundtrip changed\n" + format_netlist(c);
    }
    return "";
  });

  r.check("restriction", [&]() -> std::string {
    for (int it = 0; it < 50; ++it) {
      uint32_t n = 2 + uint32_t(rng.below(6));
      Circuit c = random_circuit(rng, n, 15);
      std::vector<int8_t> fixed(n);
      for (auto &f : fixed)
        f = int8_t(int(rng.below(3)) - 1);
      Circuit rc = restrict_inputs(c, fixed);
      for (uint64_t a = 0; a < (uint64_t(1) << rc.num_inputs()); ++a) {
        std::vector<uint8_t> x(n);
        uint32_t k = 0;
        for (uint32_t j = 0; j < n; ++j)
          x[j] = fixed[j] >= 0 ? uint8_t(fixed[j]) : uint8_t((a >> k++) & 1);
        if (evaluate(c, x) != evaluate_index(rc, a))
          return "restriction disagrees with evaluation";
      }
    }
    return "";
  });

  r.check("emaj-to-sum", [&]() -> std::string {
    for (int it = 0; it < 50; ++it) {
      EmajCircuit e;
      e.num_inputs = 1 + uint32_t(rng.below(7));
      size_t t = rng.below(5);
      for (size_t i = 0; i < t; ++i)
        e.subcircuits.push_back(random_circuit(rng, e.num_inputs, 6));
      e.u = uint32_t(rng.below(t + 1));
      auto tally = emaj_tally_table(e);
      auto sum = sum_table(emaj_to_sum(e));
      for (size_t a = 0; a < tally.size(); ++a) {
        int64_t d = int64_t(tally[a]) - int64_t(e.u);
        if (sum[a] != d * d)
          return "sum differs from (sum D_i - u)^2";
      }
    }
    return "";
  });

  r.check("code-distance", [&]() -> std::string {
    for (uint32_t n = 4; n <= 8; ++n) {
      LinearCode code = build_code(n, seed);
      if (scan_min_distance(code) < code.target_distance())
        return "n=" + std::to_string(n) + " below target distance";
    }
    return "";
  });

  r.check("fglss-equals-maxsat", [&]() -> std::string {
    for (int it = 0; it < 20; ++it) {
      CnfInstance f;
      f.y_vars = 0;
      f.z_vars = 3 + uint32_t(rng.below(4));
      size_t m = 2 + rng.below(5);
      for (size_t c = 0; c < m; ++c) {
        Clause cl;
        size_t w = 1 + rng.below(3);
        for (size_t l = 0; l < w; ++l) {
          int32_t v = 1 + int32_t(rng.below(f.z_vars));
          cl.push_back(rng.below(2) ? v : -v);
        }
        f.clauses.push_back(cl);
      }
      f.set_singleton_groups();
      GisInstance g = fglss_build(f);
      VertexLabeling none(g.num_vertices(), -1);
      if (max_independent_set(g, none).size != maxsat(f, {}))
        return "independent set size differs from max satisfied groups";
    }
    return "";
  });

  r.check("amplifier-unsat-preserved", [&]() -> std::string {
    HittingParams hp;
    hp.psi = 2;
    hp.t = 2;
    AmplifiedCircuit a = amplify_gap(all_zeros(6), 2, hp);
    if (count_sat(a.circuit).count != 0)
      return "amplified UNSAT circuit is satisfiable";
    return "";
  });

  r.check("sparse-symmetric", [&]() -> std::string {
    for (int it = 0; it < 20; ++it) {
      SparseSymmetric f;
      f.n = 3 + uint32_t(rng.below(6));
      size_t k = 1 + rng.below(2);
      while (f.support.size() < k) {
        uint32_t w = uint32_t(rng.below(f.n + 1));
        if (std::find(f.support.begin(), f.support.end(), w) == f.support.end())
          f.support.push_back(w);
      }
      std::sort(f.support.begin(), f.support.end());
      if (2 * k >= f.n)
        continue;
      auto table = emaj_truth_table(sparse_to_emaj_ands(f));
      for (uint64_t a = 0; a < table.size(); ++a)
        if (bool(table[a]) != f.eval_index(a))
          return "expansion differs from the symmetric function";
    }
    return "";
  });

  r.check("e2e-unsat-verified", [&]() -> std::string {
    Verdict v = run_e2e_prove(all_zeros(6), PipelineProfile{});
    if (v.decision != Decision::kUnsatVerified)
      return "CONST0 rejected: " + v.reason;
    return "";
  });

  r.check("e2e-half-sat-rejected", [&]() -> std::string {
    Verdict v = run_e2e_prove(projection(6, 0), PipelineProfile{});
    if (v.decision != Decision::kReject)
      return "x1 reached UNSAT-VERIFIED";
    return "";
  });

  return {r.ok, r.os.str()};
}
