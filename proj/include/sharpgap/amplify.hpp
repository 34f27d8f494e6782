// SPDX-License-Identifier: Apache-2.0
//
// Expander-walk hitting-set generator and the OR-of-copies gap amplifier.
//
// A seed r is read as: bits 0..m-1 give the start vertex x_1 of Z_{2^m}
// (string bit j = vertex bit j), then t-1 groups of s step bits each select
// one of the 2^s offsets, x_{i+1} = x_i + offset mod 2^m. Seed bits beyond
// m + s(t-1) are ignored.
#pragma once

#include "sharpgap/bigint.hpp"
#include "sharpgap/circuit.hpp"

#include <string>
#include <vector>

namespace sharpgap {

struct HittingParams {
  uint32_t psi = 8;
  /// Strings per seed; 0 selects ceil(4 log2 g).
  uint32_t t = 0;
  /// Largest accepted nontrivial eigenvalue modulus of the walk matrix.
  double max_lambda = 0.99;
  uint64_t seed = 0;
  uint32_t attempts = 64;
};

class HittingSetGen {
public:
  /// Throws Error(kConstruction) when no step bits are available or no
  /// candidate offset set meets max_lambda.
  HittingSetGen(uint32_t m, uint32_t g, const HittingParams &params = {});

  uint32_t m() const { return m_; }
  uint32_t g() const { return g_; }
  uint32_t psi() const { return psi_; }
  uint32_t t() const { return t_; }
  /// ceil(log2 g).
  uint32_t log_g() const { return log_g_; }
  uint32_t seed_bits() const { return m_ + psi_ * log_g_; }
  uint32_t step_bits() const { return step_bits_; }
  uint32_t degree() const { return uint32_t(offsets_.size()); }
  const std::vector<uint64_t> &offsets() const { return offsets_; }
  /// max over nontrivial characters of |mean offset character|.
  double lambda() const { return lambda_; }

  std::vector<std::vector<uint8_t>> expand_seed(std::span<const uint8_t> r) const;
  /// The t strings as m-bit integers, for seeds of at most 64 bits.
  std::vector<uint64_t> expand_seed_index(uint64_t r) const;

  /// Exact number of seeds whose t strings all miss f^{-1}(1), where
  /// f_table[v] is f on the string with integer value v (m <= 24). Counts
  /// walks by dynamic programming, so it equals the exhaustive seed count.
  BigInt count_failing_seeds(std::span<const uint8_t> f_table) const;

  std::string describe() const;

private:
  uint32_t m_, g_, psi_, t_, log_g_, step_bits_;
  std::vector<uint64_t> offsets_;
  double lambda_ = 0;
};

/// Spectral check of a circulant walk on Z_{2^m}: max_{j != 0}
/// |sum_o exp(2 pi i j o / 2^m)| / |offsets|.
double circulant_lambda(uint32_t m, std::span<const uint64_t> offsets);

struct AmplifiedCircuit {
  Circuit circuit;
  uint32_t n = 0;
  Circuit source;
  HittingSetGen gen;
  /// Gates of the unrolled walk alone (seed inputs, offset tables, adders).
  size_t generator_gates = 0;

  /// Comment block (`# ...` lines) describing the construction.
  std::string provenance() const;
};

/// D(r) = OR_i D'(x_i(r)) over the generator's seed bits.
AmplifiedCircuit amplify_gap(const Circuit &d_prime, uint32_t g,
                             const HittingParams &params = {});

} // namespace sharpgap
