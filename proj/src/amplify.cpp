// SPDX-License-Identifier: Apache-2.0
#include "sharpgap/amplify.hpp"
#include "sharpgap/error.hpp"
#include "sharpgap/rng.hpp"

#include <cmath>
#include <complex>
#include <iomanip>
#include <numbers>
#include <sstream>

using namespace sharpgap;

double sharpgap::circulant_lambda(uint32_t m, std::span<const uint64_t> offsets) {
  if (offsets.empty())
    fail(ErrorCode::kInvalidArgument, "circulant_lambda: no offsets");
  if (m > 24)
    fail(ErrorCode::kBudget, "circulant_lambda: m limited to 24");
  uint64_t N = uint64_t(1) << m;
  std::vector<std::complex<double>> root(N);
  for (uint64_t k = 0; k < N; ++k) {
    double a = 2 * std::numbers::pi * double(k) / double(N);
    root[k] = {std::cos(a), std::sin(a)};
  }
  double worst = 0;
  for (uint64_t j = 1; j < N; ++j) {
    std::complex<double> s = 0;
    for (uint64_t o : offsets)
      s += root[(j * o) & (N - 1)];
    worst = std::max(worst, std::abs(s) / double(offsets.size()));
  }
  return worst;
}

static uint32_t ceil_log2(uint32_t g) {
  uint32_t l = 0;
  while ((uint64_t(1) << l) < g)
    ++l;
  return l;
}

HittingSetGen::HittingSetGen(uint32_t m, uint32_t g, const HittingParams &params)
    : m_(m), g_(g), psi_(params.psi), log_g_(ceil_log2(g)) {
  if (g < 2)
    fail(ErrorCode::kInvalidArgument, "gap parameter g must be >= 2");
  if (m > 24)
    fail(ErrorCode::kBudget, "hitting-set generator limited to m <= 24");
  t_ = params.t;
  if (t_ == 0)
    t_ = uint32_t(std::ceil(4 * std::log2(double(g)) - 1e-9));
  uint32_t extra = psi_ * log_g_;
  step_bits_ = t_ > 1 ? extra / (t_ - 1) : 0;
  if (t_ > 1 && step_bits_ == 0)
    fail(ErrorCode::kConstruction,
         "psi*ceil(log2 g) = " + std::to_string(extra) +
             " seed bits cannot drive " + std::to_string(t_ - 1) +
             " walk steps; raise psi or lower t");
  if (step_bits_ > 16)
    step_bits_ = 16;
  if (t_ <= 1 || m == 0) {
    offsets_.assign(size_t(1) << step_bits_, 0);
    lambda_ = 0;
    return;
  }
  size_t d = size_t(1) << step_bits_;
  uint64_t mask = (uint64_t(1) << m) - 1;
  double best = 2;
  // The spectral scan costs 2^m * d per candidate; fewer candidates at large m.
  uint32_t attempts = std::max(1u, m > 16 ? std::min(params.attempts, 4u)
                                          : params.attempts);
  for (uint32_t a = 0; a < attempts; ++a) {
    SplitMix64 rng(params.seed * 0x100000001b3ULL + a);
    std::vector<uint64_t> cand(d);
    for (auto &o : cand)
      o = rng.next() & mask;
    double lam = circulant_lambda(m, cand);
    if (lam < best - 1e-12) {
      best = lam;
      offsets_ = cand;
    }
  }
  lambda_ = best;
  if (lambda_ > params.max_lambda)
    fail(ErrorCode::kConstruction,
         "best circulant walk has lambda " + std::to_string(lambda_) +
             " above the accepted " + std::to_string(params.max_lambda));
}

std::vector<uint64_t> HittingSetGen::expand_seed_index(uint64_t r) const {
  if (seed_bits() > 64)
    fail(ErrorCode::kInvalidArgument, "seed wider than 64 bits");
  uint64_t mask = m_ == 64 ? ~0ULL : (uint64_t(1) << m_) - 1;
  std::vector<uint64_t> out(t_);
  uint64_t x = r & mask;
  uint32_t pos = m_;
  for (uint32_t i = 0; i < t_; ++i) {
    if (i > 0) {
      uint64_t sel = (r >> pos) & ((uint64_t(1) << step_bits_) - 1);
      pos += step_bits_;
      x = (x + offsets_[sel]) & mask;
    }
    out[i] = x;
  }
  return out;
}

std::vector<std::vector<uint8_t>>
HittingSetGen::expand_seed(std::span<const uint8_t> r) const {
  if (r.size() != seed_bits())
    fail(ErrorCode::kInvalidArgument,
         "seed has " + std::to_string(r.size()) + " bits, expected " +
             std::to_string(seed_bits()));
  auto read = [&](uint32_t pos, uint32_t width) {
    uint64_t v = 0;
    for (uint32_t k = 0; k < width; ++k)
      v |= uint64_t(r[pos + k] & 1) << k;
    return v;
  };
  uint64_t mask = (uint64_t(1) << m_) - 1;
  uint64_t x = read(0, m_);
  uint32_t pos = m_;
  std::vector<std::vector<uint8_t>> out;
  for (uint32_t i = 0; i < t_; ++i) {
    if (i > 0) {
      x = (x + offsets_[read(pos, step_bits_)]) & mask;
      pos += step_bits_;
    }
    std::vector<uint8_t> s(m_);
    for (uint32_t j = 0; j < m_; ++j)
      s[j] = (x >> j) & 1;
    out.push_back(std::move(s));
  }
  return out;
}

BigInt HittingSetGen::count_failing_seeds(std::span<const uint8_t> f_table) const {
  uint64_t N = uint64_t(1) << m_;
  if (f_table.size() != N)
    fail(ErrorCode::kInvalidArgument, "f_table must have 2^m entries");
  std::vector<BigInt> cur(N), next(N);
  for (uint64_t v = 0; v < N; ++v)
    cur[v] = f_table[v] ? 0 : 1;
  // Counts stay below 2^(s(t-1)); use machine words while they fit.
  bool small = uint64_t(step_bits_) * (t_ > 0 ? t_ - 1 : 0) < 63;
  if (small) {
    std::vector<uint64_t> c(N), nx(N);
    for (uint64_t v = 0; v < N; ++v)
      c[v] = f_table[v] ? 0 : 1;
    for (uint32_t i = 1; i < t_; ++i) {
      for (uint64_t w = 0; w < N; ++w) {
        if (f_table[w]) {
          nx[w] = 0;
          continue;
        }
        uint64_t s = 0;
        for (uint64_t o : offsets_)
          s += c[(w - o) & (N - 1)];
        nx[w] = s;
      }
      c.swap(nx);
    }
    for (uint64_t v = 0; v < N; ++v)
      cur[v] = c[v];
  } else {
    for (uint32_t i = 1; i < t_; ++i) {
      for (uint64_t w = 0; w < N; ++w) {
        next[w] = 0;
        if (f_table[w])
          continue;
        for (uint64_t o : offsets_)
          next[w] += cur[(w - o) & (N - 1)];
      }
      cur.swap(next);
    }
  }
  BigInt walks = 0;
  for (uint64_t v = 0; v < N; ++v)
    walks += cur[v];
  uint32_t used = m_ + step_bits_ * (t_ > 0 ? t_ - 1 : 0);
  return walks * pow2(seed_bits() - used);
}

std::string HittingSetGen::describe() const {
  std::ostringstream os;
  os << "m=" << m_ << " g=" << g_ << " psi=" << psi_ << " t=" << t_
     << " seed_bits=" << seed_bits() << " step_bits=" << step_bits_
     << " degree=" << degree() << " lambda=" << std::setprecision(6)
     << lambda_;
  return os.str();
}

std::string AmplifiedCircuit::provenance() const {
  std::ostringstream os;
  os << "# amplified " << gen.describe() << '\n';
  os << "# offsets";
  for (uint64_t o : gen.offsets())
    os << ' ' << o;
  os << '\n';
  os << "# source inputs=" << source.num_inputs()
     << " gates=" << source.size() << '\n';
  os << "# generator_gates=" << generator_gates
     << " total_gates=" << circuit.size() << '\n';
  return os.str();
}

AmplifiedCircuit sharpgap::amplify_gap(const Circuit &d_prime, uint32_t g,
                                       const HittingParams &params) {
  uint32_t m = d_prime.num_inputs();
  HittingSetGen gen(m, g, params);
  uint32_t n = gen.seed_bits();
  CircuitBuilder b(n);

  // Walk vertices as little-endian bit vectors of builder nodes.
  std::vector<std::vector<uint32_t>> strings;
  std::vector<uint32_t> x(m);
  for (uint32_t j = 0; j < m; ++j)
    x[j] = b.input(j);
  strings.push_back(x);
  uint32_t s = gen.step_bits();
  uint32_t pos = m;
  for (uint32_t i = 1; i < gen.t(); ++i) {
    // Offset bit j as a multiplexer tree over the step selector.
    std::vector<uint32_t> sel(s);
    for (uint32_t k = 0; k < s; ++k)
      sel[k] = b.input(pos + k);
    pos += s;
    std::vector<uint32_t> off(m);
    for (uint32_t j = 0; j < m; ++j) {
      std::vector<uint32_t> level(gen.degree());
      for (size_t v = 0; v < level.size(); ++v)
        level[v] = b.constant((gen.offsets()[v] >> j) & 1);
      for (uint32_t k = 0; k < s; ++k) {
        std::vector<uint32_t> up(level.size() / 2);
        for (size_t v = 0; v < up.size(); ++v)
          up[v] = b.mux(sel[k], level[2 * v + 1], level[2 * v]);
        level.swap(up);
      }
      off[j] = level[0];
    }
    // Ripple-carry addition mod 2^m.
    uint32_t carry = b.constant(false);
    std::vector<uint32_t> sum(m);
    for (uint32_t j = 0; j < m; ++j) {
      uint32_t ab = b.lxor(x[j], off[j]);
      sum[j] = b.lxor(ab, carry);
      carry = b.lor(b.land(x[j], off[j]), b.land(carry, ab));
    }
    x = sum;
    strings.push_back(x);
  }
  std::vector<uint32_t> walk_bits;
  for (const auto &str : strings)
    walk_bits.insert(walk_bits.end(), str.begin(), str.end());
  size_t generator_gates = b.live_size(walk_bits);

  std::vector<uint32_t> copies;
  for (const auto &str : strings)
    copies.push_back(b.embed(d_prime, str));
  uint32_t out = b.lor_all(copies);

  AmplifiedCircuit a{b.build(out), n, d_prime, gen, generator_gates};
  return a;
}
