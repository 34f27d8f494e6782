// SPDX-License-Identifier: Apache-2.0
#include "sharpgap/codec.hpp"
#include "sharpgap/error.hpp"
#include "sharpgap/rng.hpp"

#include <bit>
#include <cstdio>
#include <sstream>

using namespace sharpgap;

static size_t words_for(uint32_t bits) { return (bits + 63) / 64; }

LinearCode::LinearCode(uint32_t n, std::vector<std::vector<uint64_t>> rows,
                       uint32_t delta_num, uint32_t delta_den)
    : n_(n), rows_(std::move(rows)), delta_num_(delta_num),
      delta_den_(delta_den) {
  if (n == 0)
    fail(ErrorCode::kInvalidArgument, "code message length must be >= 1");
  if (delta_den == 0 || delta_num > delta_den)
    fail(ErrorCode::kInvalidArgument, "delta must lie in [0, 1]");
  for (const auto &r : rows_) {
    if (r.size() != words_for(n))
      fail(ErrorCode::kStructural, "generator row has wrong width");
    if (n % 64 && (r.back() >> (n % 64)))
      fail(ErrorCode::kStructural, "generator row has bits beyond n");
  }
}

uint32_t LinearCode::target_distance() const {
  uint64_t num = uint64_t(delta_num_) * cn();
  return uint32_t((num + delta_den_ - 1) / delta_den_);
}

std::vector<uint32_t> LinearCode::support(uint32_t row) const {
  if (row >= cn())
    fail(ErrorCode::kOutOfRange, "codeword index out of range");
  std::vector<uint32_t> out;
  for (uint32_t j = 0; j < n_; ++j)
    if (bit(row, j))
      out.push_back(j);
  return out;
}

uint32_t sharpgap::scan_min_distance(const LinearCode &code) {
  uint32_t n = code.n(), cn = code.cn();
  if (n > 30)
    fail(ErrorCode::kBudget, "distance scan limited to n <= 30");
  // Column j of the generator as a cn-bit mask.
  size_t w = words_for(cn);
  std::vector<uint64_t> cols(size_t(n) * w, 0);
  for (uint32_t i = 0; i < cn; ++i)
    for (uint32_t j = 0; j < n; ++j)
      if (code.bit(i, j))
        cols[j * w + i / 64] |= uint64_t(1) << (i % 64);
  std::vector<uint64_t> word(w, 0);
  uint32_t best = cn;
  for (uint64_t k = 1; k < (uint64_t(1) << n); ++k) {
    uint32_t j = uint32_t(std::countr_zero(k));
    uint32_t weight = 0;
    for (size_t q = 0; q < w; ++q) {
      word[q] ^= cols[j * w + q];
      weight += uint32_t(std::popcount(word[q]));
    }
    best = std::min(best, weight);
  }
  return best;
}

LinearCode sharpgap::build_code(uint32_t n, uint64_t seed,
                                const CodeParams &params) {
  if (n == 0)
    fail(ErrorCode::kInvalidArgument, "build_code: n must be >= 1");
  if (params.c == 0)
    fail(ErrorCode::kInvalidArgument, "build_code: c must be >= 1");
  uint32_t cn = params.c * n;
  size_t w = words_for(n);
  for (uint32_t attempt = 0; attempt <= params.max_retries; ++attempt) {
    SplitMix64 rng(seed + attempt);
    std::vector<std::vector<uint64_t>> rows(cn, std::vector<uint64_t>(w, 0));
    for (auto &row : rows) {
      bool nonzero = false;
      while (!nonzero) {
        for (uint32_t j = 0; j < n; ++j)
          if (rng.next() >> 63) {
            row[j / 64] |= uint64_t(1) << (j % 64);
            nonzero = true;
          }
      }
    }
    LinearCode code(n, std::move(rows), params.delta_num, params.delta_den);
    if (n > params.verify_limit)
      return code;
    uint32_t d = scan_min_distance(code);
    if (d >= code.target_distance() && d >= 1) {
      code.set_verified_distance(d);
      return code;
    }
  }
  fail(ErrorCode::kConstruction,
       "no code with n=" + std::to_string(n) + " reached distance target after " +
           std::to_string(params.max_retries + 1) + " seeds");
}

std::vector<uint8_t> sharpgap::encode(const LinearCode &code,
                                      std::span<const uint8_t> x) {
  if (x.size() != code.n())
    fail(ErrorCode::kStructural, "encode: message has wrong length");
  std::vector<uint8_t> out(code.cn(), 0);
  for (uint32_t i = 0; i < code.cn(); ++i) {
    uint8_t b = 0;
    for (uint32_t j = 0; j < code.n(); ++j)
      b ^= uint8_t(code.bit(i, j) & (x[j] & 1));
    out[i] = b;
  }
  return out;
}

std::vector<uint8_t> sharpgap::encode_index(const LinearCode &code,
                                            uint64_t x) {
  if (code.n() > 64)
    fail(ErrorCode::kInvalidArgument, "encode_index: n exceeds 64");
  std::vector<uint8_t> out(code.cn(), 0);
  for (uint32_t i = 0; i < code.cn(); ++i)
    out[i] = uint8_t(std::popcount(code.rows()[i][0] & x) & 1);
  return out;
}

Circuit sharpgap::component(const LinearCode &code, uint32_t i) {
  std::vector<uint32_t> u = code.support(i);
  return parity_subset(code.n(), u);
}

std::string sharpgap::format_code(const LinearCode &code) {
  std::ostringstream os;
  os << "code n=" << code.n() << " cn=" << code.cn()
     << " delta=" << code.delta_num() << '/' << code.delta_den() << '\n';
  for (uint32_t i = 0; i < code.cn(); ++i) {
    for (uint32_t j = 0; j < code.n(); ++j)
      os << (code.bit(i, j) ? '1' : '0');
    os << '\n';
  }
  return os.str();
}

LinearCode sharpgap::parse_code(const std::string &text) {
  std::istringstream is(text);
  std::string line;
  auto bad = [](const std::string &msg) -> void {
    fail(ErrorCode::kParse, "code: " + msg);
  };
  while (std::getline(is, line) && line.find_first_not_of(" \t\r") ==
                                        std::string::npos) {
  }
  unsigned long n = 0, cn = 0, num = 0, den = 0;
  char tail = 0;
  if (std::sscanf(line.c_str(), "code n=%lu cn=%lu delta=%lu/%lu %c", &n, &cn,
                  &num, &den, &tail) != 4)
    bad("expected 'code n=<n> cn=<cn> delta=<num>/<den>'");
  if (n == 0 || n > (1u << 20) || cn > (1u << 24) || den == 0 || num > den)
    bad("header values out of range");
  std::vector<std::vector<uint64_t>> rows;
  while (rows.size() < cn && std::getline(is, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
      line.pop_back();
    if (line.empty())
      continue;
    if (line.size() != n || line.find_first_not_of("01") != std::string::npos)
      bad("row " + std::to_string(rows.size() + 1) + " is not " +
          std::to_string(n) + " characters of 0/1");
    std::vector<uint64_t> row(words_for(uint32_t(n)), 0);
    for (uint32_t j = 0; j < n; ++j)
      if (line[j] == '1')
        row[j / 64] |= uint64_t(1) << (j % 64);
    rows.push_back(std::move(row));
  }
  if (rows.size() != cn)
    bad("expected " + std::to_string(cn) + " rows");
  while (std::getline(is, line))
    if (line.find_first_not_of(" \t\r") != std::string::npos)
      bad("trailing content");
  LinearCode code(uint32_t(n), std::move(rows), uint32_t(num), uint32_t(den));
  if (n <= 14)
    code.set_verified_distance(scan_min_distance(code));
  return code;
}
