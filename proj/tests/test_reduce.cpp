// SPDX-License-Identifier: Apache-2.0
#include "oracles.hpp"

#include "sharpgap/error.hpp"

#include <gtest/gtest.h>

using namespace sharpgap;

namespace {

std::vector<uint8_t> bits_of(uint64_t x, uint32_t n) {
  std::vector<uint8_t> b(n);
  for (uint32_t j = 0; j < n; ++j)
    b[j] = (x >> j) & 1;
  return b;
}

} // namespace

TEST(Reduce, ConstZeroIsAlwaysSatisfiable) {
  Circuit d = all_zeros(3);
  LinearCode code = build_code(3, 0);
  CspReduction red = circuit_to_csp(d, code);
  red.cnf.validate();
  for (uint64_t x = 0; x < 8; ++x) {
    auto z = red.extractor.extract_index(x);
    ASSERT_EQ(satisfied_groups(red.cnf, z), red.cnf.num_groups());
    for (uint32_t i = 0; i < code.cn(); ++i)
      ASSERT_EQ(z[i], oracle::enc_bit(code, i, x));
  }
}

TEST(Reduce, AcceptedInputFalsifiesEveryCompletion) {
  Circuit d = parse_netlist("inputs 2\ng0 = INPUT x1\ng1 = INPUT x2\n"
                            "g2 = AND g0 g1\noutput g2\n");
  LinearCode code = build_code(2, 0, CodeParams{2});
  CspReduction red = circuit_to_csp(d, code);
  PartialAssignment tau = y_assignment(red.cnf, oracle::enc(code, 3));
  EXPECT_LT(oracle::maxsat(red.cnf, tau), red.cnf.num_groups());
  EXPECT_EQ(maxsat(red.cnf, tau), red.cnf.num_groups() - 1);
  for (uint64_t x = 0; x < 3; ++x) {
    PartialAssignment t = y_assignment(red.cnf, oracle::enc(code, x));
    EXPECT_EQ(maxsat(red.cnf, t), red.cnf.num_groups());
  }
}

TEST(Reduce, SizeFormulaForSingleInput) {
  Circuit d = projection(1, 0);
  LinearCode code = build_code(1, 0);
  CspReduction red = circuit_to_csp(d, code);
  // 0 gate clauses + 1 output unit + 4 codeword bits * chain(1) = 9.
  EXPECT_EQ(red.cnf.clauses.size(), 9u);
  EXPECT_EQ(red.cnf.num_vars(), 5u);
  EXPECT_EQ(red.cnf.y_vars, 4u);
}

TEST(Reduce, SizeFormulaOnRandomCircuits) {
  SplitMix64 rng(41);
  for (int it = 0; it < 20; ++it) {
    uint32_t n = 1 + uint32_t(rng.below(5));
    Circuit d = oracle::random_circuit(rng, n, 10);
    LinearCode code = build_code(n, it, CodeParams{2});
    CspReduction red = circuit_to_csp(d, code);
    size_t m = 1, vars = code.cn() + n;
    for (const Gate &g : d.gates()) {
      switch (g.op) {
      case Op::kAnd: case Op::kOr: m += 3; ++vars; break;
      case Op::kXor: m += 4; ++vars; break;
      case Op::kNot: m += 2; ++vars; break;
      case Op::kConst0: case Op::kConst1: m += 1; ++vars; break;
      case Op::kInput: break;
      }
    }
    for (uint32_t i = 0; i < code.cn(); ++i) {
      size_t s = code.support(i).size();
      m += s == 0 ? 1 : s == 1 ? 2 : 4 * (s - 1);
      vars += s >= 2 ? s - 2 : 0;
    }
    EXPECT_EQ(red.cnf.clauses.size(), m);
    EXPECT_EQ(red.cnf.num_vars(), vars);
    EXPECT_LE(red.cnf.clause_width(), 3u);
  }
}

TEST(Reduce, ExtractorMatchesCircuitLogic) {
  SplitMix64 rng(42);
  for (int it = 0; it < 20; ++it) {
    uint32_t n = 1 + uint32_t(rng.below(5));
    Circuit d = oracle::random_circuit(rng, n, 10);
    LinearCode code = build_code(n, it, CodeParams{2});
    CspReduction red = circuit_to_csp(d, code);
    CircuitBuilder b(n);
    std::vector<uint32_t> x;
    for (uint32_t j = 0; j < n; ++j)
      x.push_back(b.input(j));
    auto ids = red.extractor.embed(b, x);
    for (uint64_t a = 0; a < (uint64_t(1) << n); ++a) {
      auto z = red.extractor.extract_index(a);
      ASSERT_EQ(z, red.extractor.extract(bits_of(a, n)));
      size_t want = red.cnf.num_groups() - (oracle::eval(d, a) ? 1 : 0);
      ASSERT_EQ(satisfied_groups(red.cnf, z), want);
      for (uint32_t v = 1; v <= z.size(); ++v)
        ASSERT_EQ(evaluate_index(b.build(ids[v - 1]), a), bool(z[v - 1]));
    }
  }
}

TEST(Repeat, AllTuplesFraction) {
  CnfInstance f;
  f.z_vars = 2;
  f.clauses = {{1}, {2}};
  f.set_singleton_groups();
  CnfInstance r = serial_repeat(f, 3);
  EXPECT_EQ(r.num_groups(), 8u);
  std::vector<uint8_t> a = {1, 0};
  EXPECT_EQ(satisfied_groups(r, a), 1u);
  std::vector<uint8_t> all = {1, 1};
  EXPECT_EQ(satisfied_groups(r, all), 8u);
}

TEST(Repeat, SatisfiedCountIsPower) {
  SplitMix64 rng(43);
  for (int it = 0; it < 30; ++it) {
    CnfInstance f = oracle::random_grouped_cnf(rng, 0, 4, 2 + rng.below(5), 6);
    f.set_singleton_groups();
    uint32_t k = 1 + uint32_t(rng.below(3));
    CnfInstance r = serial_repeat(f, k);
    size_t m = f.num_groups();
    ASSERT_EQ(r.num_groups(), size_t(std::pow(m, k)));
    for (uint64_t x = 0; x < 16; ++x) {
      auto a = bits_of(x, 4);
      size_t s = satisfied_groups(f, a);
      ASSERT_EQ(satisfied_groups(r, a), size_t(std::pow(s, k)));
    }
  }
}

TEST(Repeat, OrderAndBudget) {
  CnfInstance f;
  f.z_vars = 3;
  f.clauses = {{1}, {2}, {3}};
  f.set_singleton_groups();
  CnfInstance r = serial_repeat(f, 2);
  // Last position varies fastest; (0,0) keeps one copy of clause 0.
  EXPECT_EQ(r.groups[0].size(), 1u);
  EXPECT_EQ(r.clauses[r.groups[1][1]], Clause{2});
  RepeatMode tight;
  tight.budget = 8;
  EXPECT_THROW(serial_repeat(f, 2, tight), Error);
  RepeatMode sampled;
  sampled.kind = RepeatMode::kSampled;
  sampled.count = 5;
  sampled.seed = 9;
  CnfInstance s1 = serial_repeat(f, 4, sampled), s2 = serial_repeat(f, 4, sampled);
  EXPECT_EQ(s1.num_groups(), 5u);
  EXPECT_EQ(s1.clauses, s2.clauses);
}

TEST(MaxSat, SmallCases) {
  CnfInstance f;
  f.z_vars = 3;
  f.clauses = {{1, 2, 3}};
  f.set_singleton_groups();
  EXPECT_EQ(maxsat(f, {}), 1u);
  CnfInstance g;
  g.z_vars = 1;
  g.clauses = {{1}, {-1}};
  g.set_singleton_groups();
  EXPECT_EQ(maxsat(g, {}), 1u);
}

TEST(MaxSat, AgreesWithEnumeration) {
  SplitMix64 rng(44);
  for (int it = 0; it < 60; ++it) {
    CnfInstance f = oracle::random_grouped_cnf(rng, 3, 5, 3 + rng.below(6), 4);
    PartialAssignment tau(f.num_vars(), -1);
    for (auto &t : tau)
      t = int8_t(int(rng.below(3)) - 1);
    ASSERT_EQ(maxsat(f, tau), oracle::maxsat(f, tau));
  }
}

TEST(MaxSat, Budget) {
  CnfInstance f;
  f.z_vars = 30;
  for (int32_t v = 1; v <= 30; ++v)
    f.clauses.push_back({v});
  f.set_singleton_groups();
  EXPECT_THROW(maxsat(f, {}, 20), Error);
}

TEST(Dimacs, RoundTrip) {
  SplitMix64 rng(45);
  CnfInstance f = oracle::random_grouped_cnf(rng, 2, 4, 7, 3);
  CnfInstance back = parse_dimacs(format_dimacs(f));
  EXPECT_EQ(back.y_vars, f.y_vars);
  EXPECT_EQ(back.z_vars, f.z_vars);
  EXPECT_EQ(back.clauses, f.clauses);
  EXPECT_EQ(back.groups, f.groups);
  CnfInstance plain = parse_dimacs("p cnf 2 2\n1 -2 0\n2 0\n");
  EXPECT_EQ(plain.num_groups(), 2u);
  EXPECT_THROW(parse_dimacs("p cnf 1 1\n2 0\n"), Error);
}
