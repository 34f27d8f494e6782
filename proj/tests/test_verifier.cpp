// SPDX-License-Identifier: Apache-2.0
#include "oracles.hpp"

#include "sharpgap/error.hpp"
#include "sharpgap/verifier.hpp"

#include <gtest/gtest.h>

using namespace sharpgap;

namespace {

const Pipeline &unsat3() {
  static const Pipeline p = build_pipeline(all_zeros(3), PipelineProfile{});
  return p;
}

const Pipeline &half3() {
  static const Pipeline p = build_pipeline(projection(3, 0), PipelineProfile{});
  return p;
}

/// Vertex i agrees with the reduction's assignment for x.
bool agrees(const Pipeline &p, uint64_t x, uint32_t i) {
  auto z = p.base.extractor.extract_index(x);
  for (auto [var, bit] : p.gis.vertices[i].assignment)
    if (z[var - 1] != bit)
      return false;
  return true;
}

/// Smallest (k, g = 2^lg) meeting 2t(kappa g + n2 2^k) < kappa 2^k g.
std::pair<uint32_t, uint64_t> plan_by_scan(uint64_t kappa, uint32_t t, uint64_t n2) {
  for (uint32_t k = 1; k < 40; ++k)
    for (uint32_t lg = 1; lg < 40; ++lg) {
      double h = std::ldexp(1.0, int(k)), g = std::ldexp(1.0, int(lg));
      if (2.0 * t * (kappa * g + n2 * h) < kappa * h * g)
        return {k, uint64_t(1) << lg};
    }
  return {0, 0};
}

} // namespace

TEST(Plan, SmallestParameters) {
  ParameterPlan p = plan_parameters(10, 4, 1, 8);
  EXPECT_EQ(p.k, 2u);
  EXPECT_EQ(p.g, 16u);
  EXPECT_TRUE(p.separation_holds());
  EXPECT_EQ(p.k_prime, uint64_t(std::ceil(2 * 10 * std::log(2.0))));
  // A larger pair also separates; the planner just returns the smallest.
  ParameterPlan big = p;
  big.k = 3;
  big.g = 64;
  EXPECT_TRUE(big.separation_holds());
  ParameterPlan small = p;
  small.g = 8;
  EXPECT_FALSE(small.separation_holds());
}

TEST(Plan, AgreesWithScan) {
  SplitMix64 rng(81);
  for (int it = 0; it < 100; ++it) {
    uint64_t kappa = 1 + rng.below(500);
    uint32_t t = 1 + uint32_t(rng.below(4));
    uint64_t n2 = 1 + rng.below(5000);
    ParameterPlan p = plan_parameters(7, kappa, t, n2);
    auto [k, g] = plan_by_scan(kappa, t, n2);
    ASSERT_EQ(p.k, k);
    ASSERT_EQ(p.g, g);
  }
  ParameterPlan one = plan_parameters(1, 1, 1, 1);
  EXPECT_TRUE(one.separation_holds());
}

TEST(Plan, Errors) {
  EXPECT_THROW(plan_parameters(1, 0, 1, 1), Error);
  PlanBudget tight;
  tight.max_k = 1;
  try {
    plan_parameters(1, 4, 1, 8, tight);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kPlanning);
  }
}

TEST(Profile, Keys) {
  PipelineProfile p;
  EXPECT_TRUE(profile_set(p, "g", "8"));
  EXPECT_EQ(p.g, 8u);
  EXPECT_TRUE(profile_set(p, "repeat_mode", "sampled"));
  EXPECT_EQ(p.repeat_mode.kind, RepeatMode::kSampled);
  EXPECT_TRUE(profile_set(p, "max_lambda", "0.5"));
  EXPECT_DOUBLE_EQ(p.max_lambda, 0.5);
  EXPECT_FALSE(profile_set(p, "colour", "red"));
  EXPECT_THROW(profile_set(p, "psi", "two"), Error);
  EXPECT_THROW(profile_set(p, "repeat_mode", "some"), Error);
  EXPECT_THROW(profile_set(p, "g", "123456789012345678901234"), Error);
}

TEST(Pipeline, StageErrorsNameTheStage) {
  PipelineProfile bad;
  bad.psi = 1;
  bad.walk_t = 3;
  try {
    build_pipeline(all_zeros(3), bad);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(std::string(e.what()).rfind("amplify: ", 0), 0u) << e.what();
    EXPECT_EQ(e.code(), ErrorCode::kConstruction);
  }
  PipelineProfile zero_k;
  zero_k.repeat_k = 0;
  try {
    build_pipeline(all_zeros(3), zero_k);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(std::string(e.what()).rfind("repeat: ", 0), 0u) << e.what();
  }
}

TEST(Pipeline, Sizes) {
  const Pipeline &p = unsat3();
  EXPECT_EQ(p.n(), 5u); // 3 + psi * log2 g
  EXPECT_EQ(p.code.cn(), 10u);
  EXPECT_EQ(p.kappa(), p.repeated.num_groups());
  EXPECT_EQ(p.kappa(), p.base.cnf.clauses.size());
  EXPECT_GE(uint64_t(1) << p.index_width, p.n2());
  EXPECT_LT(uint64_t(1) << (p.index_width - 1), p.n2());
  EXPECT_TRUE(p.plan.separation_holds());
}

TEST(Witness, HonestSelectionMatchesAgreement) {
  for (const Pipeline *p : {&unsat3(), &half3()}) {
    Circuit a = honest_selection(*p);
    ASSERT_EQ(a.num_inputs(), p->n() + p->index_width);
    for (uint64_t x = 0; x < (uint64_t(1) << p->n()); ++x)
      for (uint64_t i = 0; i < (uint64_t(1) << p->index_width); ++i) {
        bool want = i < p->n2() && agrees(*p, x, uint32_t(i));
        ASSERT_EQ(evaluate_index(a, x | (i << p->n())), want) << x << ' ' << i;
      }
  }
}

TEST(Witness, SumEqualsSelectionForWidths) {
  for (uint32_t t : {1u, 3u}) {
    PipelineProfile prof;
    prof.witness_t = t;
    Pipeline p = build_pipeline(all_zeros(3), prof);
    Witness w = build_honest_witness(p);
    EXPECT_EQ(w.u.t(), t);
    EXPECT_EQ(w.u.u, 1u);
    EXPECT_EQ(witness_width(w.u), t == 1 ? 1u : 4u);
    Circuit a = honest_selection(p);
    for (uint64_t x = 0; x < (uint64_t(1) << p.n()); ++x)
      for (uint64_t i = 0; i < (uint64_t(1) << p.index_width); i += 3) {
        uint64_t in = x | (i << p.n());
        ASSERT_EQ(sum_eval_index(w.r, in), evaluate_index(a, in) ? 1 : 0);
      }
  }
}

TEST(Witness, Width) {
  EmajCircuit e{2, {projection(2, 0), projection(2, 1), projection(2, 0)}, 0};
  EXPECT_EQ(witness_width(e), 9u);
  e.u = 1;
  EXPECT_EQ(witness_width(e), 4u);
  e.u = 3;
  EXPECT_EQ(witness_width(e), 9u);
}

TEST(Verify, UnsatAcceptedWithExactTotals) {
  const Pipeline &p = unsat3();
  ExhaustiveOracle o;
  Witness w = build_honest_witness(p);
  Verdict v = verify_witness(p, w.u, o);
  ASSERT_EQ(v.decision, Decision::kUnsatVerified) << v.reason;
  EXPECT_EQ(*v.independence, 0);
  EXPECT_EQ(*v.consistency, 0);
  EXPECT_EQ(v.threshold, BigInt(p.kappa()) << p.n());
  EXPECT_EQ(*v.final_total, v.threshold);
  size_t t = v.witness_terms;
  size_t s_pairs = 0;
  for (const auto &vx : p.gis.vertices)
    s_pairs += vx.s_pairs.size();
  EXPECT_EQ(v.calls_independence, p.gis.edges.size() * t * t);
  EXPECT_EQ(v.calls_consistency, s_pairs * t);
  EXPECT_EQ(v.calls_final, p.n2() * t);
  EXPECT_EQ(o.calls(), v.calls_final); // the counter restarts per phase
  EXPECT_FALSE(v.separation_certified);
  EXPECT_NE(v.to_json().find("\"decision\": \"UNSAT-VERIFIED\""), std::string::npos);
}

TEST(Verify, HalfSatRejected) {
  Verdict v = run_e2e_prove(projection(3, 0), PipelineProfile{});
  EXPECT_EQ(v.decision, Decision::kReject);
  EXPECT_EQ(std::string(to_string(v.decision)), "REJECT");
  Verdict u = run_e2e_prove(all_zeros(3), PipelineProfile{});
  EXPECT_EQ(u.decision, Decision::kUnsatVerified) << u.reason;
}

TEST(Verify, RejectsMalformedWitnesses) {
  const Pipeline &p = unsat3();
  ExhaustiveOracle o;
  EmajCircuit zero{p.n() + p.index_width, {}, 0};
  Verdict v = verify_witness(p, zero, o);
  EXPECT_EQ(v.decision, Decision::kReject);
  EXPECT_EQ(v.reason, "final sum below 2^n * kappa");
  EmajCircuit narrow{p.n(), {all_zeros(p.n())}, 1};
  EXPECT_EQ(verify_witness(p, narrow, o).decision, Decision::kReject);
  Witness w = build_honest_witness(p);
  EmajCircuit wide = w.u;
  wide.subcircuits.push_back(wide.subcircuits[0]);
  wide.subcircuits.push_back(wide.subcircuits[0]);
  wide.u = 0;
  Verdict vw = verify_witness(p, wide, o);
  EXPECT_EQ(vw.decision, Decision::kReject);
  EXPECT_NE(vw.reason.find("width"), std::string::npos) << vw.reason;
}

TEST(Verify, PhasesOnTrivialGraphs) {
  // Edgeless graph with empty S sets: both zero-checks are vacuous.
  GisInstance g;
  g.vertices = {{0, {}, {}}, {1, {}, {}}};
  g.num_groups = 2;
  g.index();
  Circuit one(2, {{Op::kConst1, 0, 0}}, 0);
  SumCircuit r{2, {{1, one}}, true};
  TermRestrictions terms(r, 1, 2);
  ExhaustiveOracle o;
  EXPECT_EQ(verify_independence(terms, g, o), 0);
  LinearCode code = build_code(1, 0);
  EXPECT_EQ(verify_consistency(terms, g, code, o), 0);
  EXPECT_EQ(o.calls(), 0u);
  EXPECT_EQ(final_sum(terms, g, o), 4); // 2 vertices * 2 values of x
  g.edges = {{0, 1}};
  g.index();
  EXPECT_EQ(verify_independence(terms, g, o), 2);
}

TEST(Verify, RestrictionsMaskOutOfRangeIndices) {
  Circuit one(3, {{Op::kConst1, 0, 0}}, 0);
  SumCircuit r{3, {{1, one}, {-1, projection(3, 0)}}, false};
  TermRestrictions terms(r, 2, 3);
  EXPECT_EQ(terms.num_terms(), 2u);
  EXPECT_EQ(terms.sign(1), -1);
  const Circuit &c = terms.get(0, 1);
  EXPECT_EQ(c.num_inputs(), 1u);
  EXPECT_TRUE(evaluate_index(c, 0));
  EXPECT_THROW(terms.get(0, 3), Error);
  EXPECT_EQ(&terms.get(0, 1), &c);
}

TEST(WitnessFile, RoundTripAndCrossCheck) {
  const Pipeline &p = unsat3();
  Witness w = build_honest_witness(p);
  std::string text = format_witness_file(p, w.u);
  WitnessFile f = parse_witness_file(text);
  EXPECT_EQ(f.n, p.n());
  EXPECT_EQ(f.kappa, p.kappa());
  EXPECT_EQ(f.n2, p.n2());
  EXPECT_EQ(f.index_width, p.index_width);
  EXPECT_EQ(f.profile.g, p.profile.g);
  EXPECT_EQ(f.u.t(), w.u.t());
  Verdict v = verify_witness_file(all_zeros(3), text);
  EXPECT_EQ(v.decision, Decision::kUnsatVerified) << v.reason;

  std::string key = " kappa=" + std::to_string(p.kappa());
  std::string tampered = text;
  tampered.replace(tampered.find(key), key.size(),
                   " kappa=" + std::to_string(p.kappa() + 1));
  try {
    verify_witness_file(all_zeros(3), tampered);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidWitness);
  }
  // The same witness against a different base circuit.
  EXPECT_THROW(verify_witness_file(all_zeros(4), text), Error);
}

TEST(Mutants, NoneAcceptedOnHalfSat) {
  const Pipeline &p = half3();
  auto muts = witness_mutations(p, 1, 12);
  ASSERT_EQ(muts.size(), 12u);
  std::set<std::string> kinds;
  ExhaustiveOracle o;
  for (const Mutant &m : muts) {
    kinds.insert(m.name.substr(0, m.name.find('-')));
    Verdict v = verify_witness(p, m.u, o);
    EXPECT_EQ(v.decision, Decision::kReject) << m.name;
  }
  EXPECT_GE(kinds.size(), 6u);
}

TEST(Mutants, Deterministic) {
  auto a = witness_mutations(unsat3(), 7, 5), b = witness_mutations(unsat3(), 7, 5);
  ASSERT_EQ(a.size(), b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].name, b[i].name);
    EXPECT_EQ(format_emaj(a[i].u), format_emaj(b[i].u));
  }
}
