// SPDX-License-Identifier: Apache-2.0
#include "oracles.hpp"

#include "sharpgap/error.hpp"

#include <gtest/gtest.h>

using namespace sharpgap;

namespace {

Circuit xor2() {
  return Circuit(2, {{Op::kInput, 0, 0}, {Op::kInput, 1, 0}, {Op::kXor, 0, 1}},
                 2);
}

} // namespace

TEST(Circuit, ConstantsAndXor) {
  Circuit one(3, {{Op::kConst1, 0, 0}}, 0);
  for (uint64_t x = 0; x < 8; ++x)
    EXPECT_TRUE(evaluate_index(one, x));
  EXPECT_FALSE(evaluate_index(xor2(), 3));
  EXPECT_TRUE(evaluate_index(xor2(), 1));
  std::vector<uint8_t> x = {1, 1};
  EXPECT_FALSE(evaluate(xor2(), x));
}

TEST(Circuit, RejectsMalformedTopology) {
  EXPECT_THROW(Circuit(1, {{Op::kAnd, 0, 1}, {Op::kInput, 0, 0}}, 0), Error);
  EXPECT_THROW(Circuit(1, {{Op::kInput, 3, 0}}, 0), Error);
  EXPECT_THROW(Circuit(1, {{Op::kInput, 0, 0}}, 4), Error);
  EXPECT_THROW(Circuit(1, {{Op::kInput, 0, 0}, {Op::kNot, 0, 1}}, 1), Error);
  try {
    Circuit(1, {{Op::kNot, 0, 0}}, 0);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kStructural);
  }
}

TEST(Circuit, WidthMismatchIsStructural) {
  std::vector<uint8_t> x = {1};
  try {
    evaluate(xor2(), x);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kStructural);
  }
}

TEST(Circuit, MatchesRecursiveEvaluator) {
  SplitMix64 rng(11);
  for (int it = 0; it < 30; ++it) {
    Circuit c = oracle::random_circuit(rng, 8, 20);
    for (uint64_t x = 0; x < 256; ++x)
      ASSERT_EQ(evaluate_index(c, x), oracle::eval(c, x));
  }
}

TEST(Bitsliced, ConstZeroAndInputPattern) {
  EXPECT_EQ(evaluate_bitsliced(all_zeros(8), 0).word, 0u);
  TruthSlice s = evaluate_bitsliced(projection(8, 0), 0);
  EXPECT_EQ(s.word, 0xAAAAAAAAAAAAAAAAULL); // bit k = value on assignment k
  EXPECT_EQ(s.width, 64u);
  TruthSlice narrow = evaluate_bitsliced(projection(2, 0), 0);
  EXPECT_EQ(narrow.width, 4u);
  EXPECT_EQ(narrow.word, 0b1010u);
}

TEST(Bitsliced, HighInputsFollowBlockBase) {
  Circuit x8 = projection(10, 7);
  EXPECT_EQ(evaluate_bitsliced(x8, 0).word, 0u);
  EXPECT_EQ(evaluate_bitsliced(x8, 128).word, ~0ULL);
  EXPECT_THROW(evaluate_bitsliced(x8, 3), Error);
}

TEST(Bitsliced, PopcountsMatchNaiveCount) {
  SplitMix64 rng(12);
  for (int it = 0; it < 20; ++it) {
    Circuit c = oracle::random_circuit(rng, 10, 25);
    uint64_t total = 0;
    for (uint64_t base = 0; base < 1024; base += 64)
      total += std::popcount(evaluate_bitsliced(c, base).word);
    EXPECT_EQ(total, oracle::count(c));
  }
}

TEST(Closure, NegateAndAnd) {
  Circuit one(1, {{Op::kConst1, 0, 0}}, 0);
  Circuit z = negate(one);
  EXPECT_FALSE(evaluate_index(z, 0));
  EXPECT_FALSE(evaluate_index(z, 1));
  Circuit x1 = projection(1, 0);
  Circuit contra = and2(x1, negate(x1));
  EXPECT_FALSE(evaluate_index(contra, 0));
  EXPECT_FALSE(evaluate_index(contra, 1));
}

TEST(Closure, ParitySubset) {
  std::vector<uint32_t> subset = {0, 2};
  Circuit p = parity_subset(4, subset);
  for (uint64_t x = 0; x < 16; ++x)
    EXPECT_EQ(evaluate_index(p, x), bool(((x >> 0) ^ (x >> 2)) & 1));
  EXPECT_TRUE(parity_subset(3, {}).is_constant());
  std::vector<uint32_t> dup = {1, 1};
  EXPECT_THROW(parity_subset(3, dup), Error);
}

TEST(Closure, BinaryOpsOnRandomCircuits) {
  SplitMix64 rng(13);
  for (int it = 0; it < 30; ++it) {
    Circuit a = oracle::random_circuit(rng, 6, 12);
    Circuit b = oracle::random_circuit(rng, 6, 12);
    Circuit both = and2(a, b), either = or2(a, b);
    Circuit flip = xor_const(a, true);
    for (uint64_t x = 0; x < 64; ++x) {
      bool va = oracle::eval(a, x), vb = oracle::eval(b, x);
      ASSERT_EQ(oracle::eval(both, x), va && vb);
      ASSERT_EQ(oracle::eval(either, x), va || vb);
      ASSERT_EQ(oracle::eval(flip, x), !va);
    }
  }
  EXPECT_THROW(and2(projection(2, 0), projection(3, 0)), Error);
}

TEST(Closure, WidenIgnoresExtraInputs) {
  Circuit w = widen(xor2(), 5);
  EXPECT_EQ(w.num_inputs(), 5u);
  for (uint64_t x = 0; x < 32; ++x)
    EXPECT_EQ(evaluate_index(w, x), bool((x ^ (x >> 1)) & 1));
}

TEST(Restrict, AgreesWithEvaluation) {
  SplitMix64 rng(14);
  for (int it = 0; it < 60; ++it) {
    uint32_t n = 1 + uint32_t(rng.below(8));
    Circuit c = oracle::random_circuit(rng, n, 20);
    std::vector<int8_t> fixed(n);
    for (auto &f : fixed)
      f = int8_t(int(rng.below(3)) - 1);
    Circuit r = restrict_inputs(c, fixed);
    uint32_t free_count = 0;
    for (int8_t f : fixed)
      free_count += f < 0;
    ASSERT_EQ(r.num_inputs(), free_count);
    for (uint64_t a = 0; a < (uint64_t(1) << free_count); ++a) {
      uint64_t x = 0;
      uint32_t k = 0;
      for (uint32_t j = 0; j < n; ++j) {
        uint64_t bit = fixed[j] >= 0 ? uint64_t(fixed[j]) : (a >> k++) & 1;
        x |= bit << j;
      }
      ASSERT_EQ(oracle::eval(r, a), oracle::eval(c, x));
    }
  }
}

TEST(Restrict, TrailingIndexAndReuse) {
  SplitMix64 rng(15);
  Circuit c = oracle::random_circuit(rng, 7, 30);
  Restrictor rs(c);
  for (uint64_t v = 0; v < 8; ++v) {
    Circuit r1 = rs.fix_trailing(3, v);
    Circuit r2 = fix_trailing(c, 3, v);
    ASSERT_EQ(r1.num_inputs(), 4u);
    for (uint64_t x = 0; x < 16; ++x) {
      bool want = oracle::eval(c, x | (v << 4));
      ASSERT_EQ(oracle::eval(r1, x), want);
      ASSERT_EQ(oracle::eval(r2, x), want);
    }
  }
}

TEST(Builder, FoldsAndHashes) {
  CircuitBuilder b(2);
  uint32_t x = b.input(0), y = b.input(1);
  EXPECT_EQ(b.land(x, y), b.land(y, x));
  EXPECT_EQ(b.constant_value(b.land(x, b.lnot(x))), 0);
  EXPECT_EQ(b.constant_value(b.lor(x, b.lnot(x))), 1);
  EXPECT_EQ(b.lnot(b.lnot(x)), x);
  EXPECT_EQ(b.mux(b.constant(true), x, y), x);
  Circuit c = b.build(b.lxor(x, y));
  EXPECT_EQ(c.size(), 3u); // dead gates dropped
}

TEST(Builder, EmbedRewiresInputs) {
  CircuitBuilder b(2);
  std::vector<uint32_t> swapped = {b.input(1), b.input(0)};
  Circuit andnot(2, {{Op::kInput, 0, 0}, {Op::kInput, 1, 0}, {Op::kNot, 1, 0},
                     {Op::kAnd, 0, 2}},
                 3);
  Circuit c = b.build(b.embed(andnot, swapped));
  for (uint64_t x = 0; x < 4; ++x)
    EXPECT_EQ(evaluate_index(c, x), bool(((x >> 1) & 1) && !(x & 1)));
}

TEST(Netlist, RoundTrip) {
  SplitMix64 rng(16);
  for (int it = 0; it < 30; ++it) {
    Circuit c = oracle::random_circuit(rng, 1 + uint32_t(rng.below(6)), 15);
    EXPECT_EQ(parse_netlist(format_netlist(c)), c);
  }
}

TEST(Netlist, SparseIdsAndInlineInputs) {
  Circuit c = parse_netlist("# comment\ninputs 3\n"
                            "g7 = AND x1 x3  # trailing\n"
                            "g2 = NOT g7\n"
                            "output g2\n");
  for (uint64_t x = 0; x < 8; ++x)
    EXPECT_EQ(evaluate_index(c, x), !((x & 1) && (x & 4)));
}

TEST(Netlist, ParseErrors) {
  auto code_of = [](const std::string &text) {
    try {
      parse_netlist(text);
    } catch (const Error &e) {
      return e.code();
    }
    return ErrorCode::kIo;
  };
  EXPECT_EQ(code_of("inputs 1\ng0 = FOO x1\noutput g0\n"), ErrorCode::kParse);
  EXPECT_EQ(code_of("inputs 1\ng0 = AND g5 x1\noutput g0\n"), ErrorCode::kParse);
  EXPECT_EQ(code_of("inputs 1\ng0 = INPUT x1\n"), ErrorCode::kParse);
  EXPECT_EQ(code_of("inputs 1\ng0 = INPUT x2\noutput g0\n"), ErrorCode::kParse);
  EXPECT_EQ(code_of("inputs 1\ng0 = INPUT x1\noutput g0\ntrailing\n"),
            ErrorCode::kParse);
  EXPECT_EQ(code_of("inputs 1\nt = INPUT x1\noutput t\n"), ErrorCode::kParse);
}
