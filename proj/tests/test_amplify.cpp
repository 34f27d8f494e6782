// SPDX-License-Identifier: Apache-2.0
#include "oracles.hpp"

#include "sharpgap/amplify.hpp"
#include "sharpgap/error.hpp"
#include "sharpgap/sharp_sat.hpp"

#include <gtest/gtest.h>

using namespace sharpgap;

namespace {

/// Failing seeds by enumerating every seed and its walk.
uint64_t failing_seeds_brute(const HittingSetGen &gen,
                             const std::vector<uint8_t> &table) {
  uint64_t fails = 0;
  for (uint64_t r = 0; r < (uint64_t(1) << gen.seed_bits()); ++r) {
    bool hit = false;
    for (uint64_t s : gen.expand_seed_index(r))
      hit |= table[s] != 0;
    fails += !hit;
  }
  return fails;
}

std::vector<uint8_t> random_half_table(SplitMix64 &rng, uint32_t m) {
  size_t size = size_t(1) << m;
  std::vector<uint8_t> t(size, 0);
  std::vector<size_t> idx(size);
  for (size_t i = 0; i < size; ++i)
    idx[i] = i;
  for (size_t i = size - 1; i > 0; --i)
    std::swap(idx[i], idx[rng.below(i + 1)]);
  for (size_t i = 0; i < size / 2; ++i)
    t[idx[i]] = 1;
  return t;
}

} // namespace

TEST(Walk, SeedExpansionShape) {
  HittingParams p;
  p.psi = 4;
  p.t = 5;
  HittingSetGen gen(8, 16, p);
  EXPECT_EQ(gen.log_g(), 4u);
  EXPECT_EQ(gen.seed_bits(), 24u);
  EXPECT_EQ(gen.step_bits(), 4u);
  EXPECT_EQ(gen.degree(), 16u);
  EXPECT_LE(gen.lambda(), 0.99);
  SplitMix64 rng(71);
  for (int it = 0; it < 50; ++it) {
    uint64_t r = rng.below(uint64_t(1) << 24);
    auto idx = gen.expand_seed_index(r);
    std::vector<uint8_t> bits(24);
    for (uint32_t k = 0; k < 24; ++k)
      bits[k] = (r >> k) & 1;
    auto strs = gen.expand_seed(bits);
    ASSERT_EQ(strs.size(), 5u);
    ASSERT_EQ(idx[0], r & 0xff);
    for (size_t i = 0; i < 5; ++i) {
      uint64_t v = 0;
      for (uint32_t j = 0; j < 8; ++j)
        v |= uint64_t(strs[i][j]) << j;
      ASSERT_EQ(v, idx[i]);
      if (i > 0) {
        uint64_t sel = (r >> (8 + 4 * (i - 1))) & 15;
        ASSERT_EQ(v, (idx[i - 1] + gen.offsets()[sel]) & 0xff);
      }
    }
  }
}

TEST(Walk, DeterministicInSeed) {
  HittingParams p;
  p.seed = 5;
  HittingSetGen a(6, 4, p), b(6, 4, p);
  EXPECT_EQ(a.offsets(), b.offsets());
  EXPECT_EQ(a.lambda(), b.lambda());
}

TEST(Walk, ConstructionErrors) {
  HittingParams p;
  p.psi = 1;
  p.t = 9;
  EXPECT_THROW(HittingSetGen(6, 4, p), Error);
  EXPECT_THROW(HittingSetGen(6, 1), Error);
  HittingParams strict;
  strict.max_lambda = 1e-9;
  try {
    HittingSetGen(6, 4, strict);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kConstruction);
  }
}

TEST(Walk, LambdaOfCirculant) {
  // A single zero offset never mixes.
  std::vector<uint64_t> zero = {0};
  EXPECT_NEAR(circulant_lambda(4, zero), 1.0, 1e-12);
  // Offsets {0, 8} on Z_16 cancel the odd characters only.
  std::vector<uint64_t> half = {0, 8};
  EXPECT_NEAR(circulant_lambda(4, half), 1.0, 1e-12);
}

TEST(Walk, DpCountMatchesEnumeration) {
  SplitMix64 rng(72);
  HittingParams p;
  p.psi = 4;
  p.max_lambda = 1.0; // two offsets cannot mix well on the larger rings
  for (uint32_t m = 3; m <= 8; ++m) {
    p.seed = m;
    HittingSetGen gen(m, 4, p);
    for (int it = 0; it < 5; ++it) {
      auto table = random_half_table(rng, m);
      if (it == 0)
        std::fill(table.begin(), table.end(), 0);
      ASSERT_EQ(gen.count_failing_seeds(table), BigInt(failing_seeds_brute(gen, table)));
    }
  }
}

TEST(Walk, BalancedSetsAreHit) {
  SplitMix64 rng(73);
  HittingParams p;
  p.psi = 8;
  for (int it = 0; it < 200; ++it) {
    uint32_t m = 10;
    p.seed = uint64_t(it);
    HittingSetGen gen(m, 4, p);
    auto table = random_half_table(rng, m);
    BigInt fails = gen.count_failing_seeds(table);
    BigInt total = BigInt(1) << gen.seed_bits();
    ASSERT_LE(fails * gen.g(), total) << gen.describe();
  }
}

TEST(Amplify, ShapeAndSemantics) {
  HittingParams p;
  p.psi = 4;
  p.t = 5;
  AmplifiedCircuit a = amplify_gap(projection(8, 0), 16, p);
  EXPECT_EQ(a.n, 24u);
  EXPECT_EQ(a.circuit.num_inputs(), 24u);
  EXPECT_GT(a.generator_gates, 0u);
  // D(r) = OR over walk strings of x1, checked on every seed.
  uint64_t ones = 0;
  for (uint64_t r = 0; r < (uint64_t(1) << 24); r += 1) {
    bool want = false;
    for (uint64_t s : a.gen.expand_seed_index(r))
      want |= s & 1;
    if ((r & 0xfff) == 0)
      ASSERT_EQ(evaluate_index(a.circuit, r), want) << r;
    ones += want;
  }
  BigInt total = BigInt(1) << 24;
  EXPECT_EQ(count_sat(a.circuit).count, BigInt(ones));
  EXPECT_GE(BigInt(ones) * 16, total * 15);
}

TEST(Amplify, PreservesUnsatAndTautology) {
  HittingParams p;
  p.psi = 8;
  AmplifiedCircuit zero = amplify_gap(all_zeros(5), 4, p);
  EXPECT_EQ(count_sat(zero.circuit).count, 0);
  Circuit one(5, {{Op::kConst1, 0, 0}}, 0);
  AmplifiedCircuit all = amplify_gap(one, 4, p);
  EXPECT_EQ(count_sat(all.circuit).count, BigInt(1) << all.n);
  SplitMix64 rng(74);
  for (int it = 0; it < 10; ++it) {
    Circuit u = oracle::random_unsat(rng, 4, 8);
    EXPECT_EQ(count_sat(amplify_gap(u, 4, p).circuit).count, 0);
  }
}

TEST(Amplify, AgreesWithWalkOnRandomSources) {
  SplitMix64 rng(75);
  HittingParams p;
  p.psi = 3;
  p.t = 4;
  p.max_lambda = 1.0;
  for (int it = 0; it < 10; ++it) {
    Circuit d = oracle::random_circuit(rng, 4, 10);
    p.seed = uint64_t(it);
    AmplifiedCircuit a = amplify_gap(d, 2, p);
    for (uint64_t r = 0; r < (uint64_t(1) << a.n); ++r) {
      bool want = false;
      for (uint64_t s : a.gen.expand_seed_index(r))
        want |= oracle::eval(d, s);
      ASSERT_EQ(oracle::eval(a.circuit, r), want);
    }
  }
}

TEST(Amplify, Provenance) {
  HittingParams p;
  p.psi = 4;
  AmplifiedCircuit a = amplify_gap(projection(4, 1), 4, p);
  std::string prov = a.provenance();
  EXPECT_EQ(prov.rfind("# amplified m=4 g=4", 0), 0u) << prov;
  EXPECT_NE(prov.find("# offsets"), std::string::npos);
  EXPECT_NE(prov.find("generator_gates="), std::string::npos);
}
