// SPDX-License-Identifier: Apache-2.0
//
// Random linear codes with exhaustively verified minimum distance.
#pragma once

#include "sharpgap/circuit.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace sharpgap {

struct CodeParams {
  uint32_t c = 4;          // rate constant: cn = c * n
  uint32_t delta_num = 1;  // claimed relative distance delta_num/delta_den
  uint32_t delta_den = 8;
  uint32_t max_retries = 64;
  /// Message lengths up to this bound get an exhaustive distance scan.
  uint32_t verify_limit = 14;
};

/// Generator rows: row i lists U_i, the message bits whose parity is
/// codeword bit i. Rows are stored as bit masks over the n message bits.
class LinearCode {
public:
  LinearCode(uint32_t n, std::vector<std::vector<uint64_t>> rows,
             uint32_t delta_num, uint32_t delta_den);

  uint32_t n() const { return n_; }
  uint32_t cn() const { return uint32_t(rows_.size()); }
  uint32_t delta_num() const { return delta_num_; }
  uint32_t delta_den() const { return delta_den_; }
  /// ceil(delta * cn).
  uint32_t target_distance() const;
  /// Minimum distance found by the exhaustive scan; 0 when not verified.
  uint32_t verified_distance() const { return verified_distance_; }
  void set_verified_distance(uint32_t d) { verified_distance_ = d; }

  bool bit(uint32_t row, uint32_t j) const {
    return (rows_[row][j / 64] >> (j % 64)) & 1;
  }
  /// U_i as 0-based message positions.
  std::vector<uint32_t> support(uint32_t row) const;
  const std::vector<std::vector<uint64_t>> &rows() const { return rows_; }

  bool operator==(const LinearCode &) const = default;

private:
  uint32_t n_;
  std::vector<std::vector<uint64_t>> rows_;
  uint32_t delta_num_, delta_den_;
  uint32_t verified_distance_ = 0;
};

/// Deterministic in (n, seed, params). For n <= params.verify_limit the
/// minimum distance is verified by a Gray-code scan of all nonzero messages
/// and the seed is incremented until the target is met.
LinearCode build_code(uint32_t n, uint64_t seed, const CodeParams &params = {});

/// Minimum weight over all nonzero codewords (n <= 30).
uint32_t scan_min_distance(const LinearCode &code);

std::vector<uint8_t> encode(const LinearCode &code,
                            std::span<const uint8_t> x);
/// Codeword of the message whose bit j is message bit j (n <= 64).
std::vector<uint8_t> encode_index(const LinearCode &code, uint64_t x);
/// Codeword bit i (0-based) as a parity circuit over the n message inputs.
Circuit component(const LinearCode &code, uint32_t i);

std::string format_code(const LinearCode &code);
LinearCode parse_code(const std::string &text);

} // namespace sharpgap
