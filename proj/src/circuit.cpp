// SPDX-License-Identifier: Apache-2.0
#include "sharpgap/circuit.hpp"
#include "sharpgap/error.hpp"

#include <algorithm>
#include <bit>
#include <istream>
#include <ostream>
#include <sstream>

using namespace sharpgap;

const char *sharpgap::op_name(Op op) {
  switch (op) {
  case Op::kAnd:
    return "AND";
  case Op::kOr:
    return "OR";
  case Op::kNot:
    return "NOT";
  case Op::kXor:
    return "XOR";
  case Op::kConst0:
    return "CONST0";
  case Op::kConst1:
    return "CONST1";
  case Op::kInput:
    return "INPUT";
  }
  return "?";
}

unsigned sharpgap::op_arity(Op op) {
  switch (op) {
  case Op::kAnd:
  case Op::kOr:
  case Op::kXor:
    return 2;
  case Op::kNot:
    return 1;
  default:
    return 0;
  }
}

//===----------------------------------------------------------------------===//
// Circuit
//===----------------------------------------------------------------------===//

Circuit::Circuit()
    : gates_(std::make_shared<const std::vector<Gate>>(
          std::vector<Gate>{Gate{Op::kConst0, 0, 0}})) {}

Circuit::Circuit(uint32_t num_inputs, std::vector<Gate> gates, uint32_t output)
    : num_inputs_(num_inputs), output_(output) {
  if (gates.empty())
    fail(ErrorCode::kStructural, "circuit has no gates");
  if (gates.size() >= (1u << 30))
    fail(ErrorCode::kStructural, "circuit too large");
  for (size_t i = 0; i < gates.size(); ++i) {
    const Gate &g = gates[i];
    unsigned arity = op_arity(g.op);
    if (g.op == Op::kInput) {
      if (g.a >= num_inputs)
        fail(ErrorCode::kStructural, "gate g" + std::to_string(i) +
                                         " reads input beyond arity");
      continue;
    }
    if ((arity >= 1 && g.a >= i) || (arity == 2 && g.b >= i))
      fail(ErrorCode::kStructural,
           "gate g" + std::to_string(i) + " is not in topological order");
    if ((arity < 1 && g.a != 0) || (arity < 2 && g.b != 0))
      fail(ErrorCode::kStructural,
           "gate g" + std::to_string(i) + " has surplus operands");
  }
  if (output >= gates.size())
    fail(ErrorCode::kStructural, "output gate does not exist");
  gates_ = std::make_shared<const std::vector<Gate>>(std::move(gates));
}

bool Circuit::is_constant(bool *value) const {
  Op op = (*gates_)[output_].op;
  if (op != Op::kConst0 && op != Op::kConst1)
    return false;
  if (value)
    *value = op == Op::kConst1;
  return true;
}

bool Circuit::operator==(const Circuit &other) const {
  return num_inputs_ == other.num_inputs_ && output_ == other.output_ &&
         (gates_ == other.gates_ || *gates_ == *other.gates_);
}

//===----------------------------------------------------------------------===//
// CircuitBuilder
//===----------------------------------------------------------------------===//

static constexpr uint32_t kNone = UINT32_MAX;

CircuitBuilder::CircuitBuilder(uint32_t num_inputs)
    : num_inputs_(num_inputs), input_ids_(num_inputs, kNone),
      const_ids_{kNone, kNone} {}

uint32_t CircuitBuilder::add(Op op, uint32_t a, uint32_t b) {
  if (op_arity(op) == 2 && a > b)
    std::swap(a, b);
  uint64_t key = (uint64_t(op) << 60) | (uint64_t(a) << 30) | b;
  auto [it, inserted] = strash_.try_emplace(key, uint32_t(gates_.size()));
  if (inserted) {
    if (gates_.size() >= (1u << 30))
      fail(ErrorCode::kBudget, "circuit builder exceeded 2^30 gates");
    gates_.push_back(Gate{op, a, b});
  }
  return it->second;
}

uint32_t CircuitBuilder::input(uint32_t index) {
  if (index >= num_inputs_)
    fail(ErrorCode::kStructural, "input index out of range");
  if (input_ids_[index] == kNone) {
    input_ids_[index] = uint32_t(gates_.size());
    gates_.push_back(Gate{Op::kInput, index, 0});
  }
  return input_ids_[index];
}

uint32_t CircuitBuilder::constant(bool value) {
  uint32_t &slot = const_ids_[value];
  if (slot == kNone) {
    slot = uint32_t(gates_.size());
    gates_.push_back(Gate{value ? Op::kConst1 : Op::kConst0, 0, 0});
  }
  return slot;
}

int CircuitBuilder::constant_value(uint32_t id) const {
  Op op = gates_[id].op;
  if (op == Op::kConst0)
    return 0;
  if (op == Op::kConst1)
    return 1;
  return -1;
}

// True when one id is the NOT of the other.
static bool complementary(const std::vector<Gate> &gates, uint32_t a,
                          uint32_t b) {
  return (gates[a].op == Op::kNot && gates[a].a == b) ||
         (gates[b].op == Op::kNot && gates[b].a == a);
}

uint32_t CircuitBuilder::land(uint32_t a, uint32_t b) {
  int ca = constant_value(a), cb = constant_value(b);
  if (ca == 0 || cb == 0)
    return constant(false);
  if (ca == 1)
    return b;
  if (cb == 1 || a == b)
    return a;
  if (complementary(gates_, a, b))
    return constant(false);
  return add(Op::kAnd, a, b);
}

uint32_t CircuitBuilder::lor(uint32_t a, uint32_t b) {
  int ca = constant_value(a), cb = constant_value(b);
  if (ca == 1 || cb == 1)
    return constant(true);
  if (ca == 0)
    return b;
  if (cb == 0 || a == b)
    return a;
  if (complementary(gates_, a, b))
    return constant(true);
  return add(Op::kOr, a, b);
}

uint32_t CircuitBuilder::lnot(uint32_t a) {
  int ca = constant_value(a);
  if (ca >= 0)
    return constant(ca == 0);
  if (gates_[a].op == Op::kNot)
    return gates_[a].a;
  return add(Op::kNot, a, 0);
}

uint32_t CircuitBuilder::lxor(uint32_t a, uint32_t b) {
  int ca = constant_value(a), cb = constant_value(b);
  if (ca == 0)
    return b;
  if (cb == 0)
    return a;
  if (ca == 1)
    return lnot(b);
  if (cb == 1)
    return lnot(a);
  if (a == b)
    return constant(false);
  if (complementary(gates_, a, b))
    return constant(true);
  return add(Op::kXor, a, b);
}

uint32_t CircuitBuilder::mux(uint32_t sel, uint32_t hi, uint32_t lo) {
  int cs = constant_value(sel);
  if (cs >= 0)
    return cs ? hi : lo;
  if (hi == lo)
    return hi;
  int ch = constant_value(hi), cl = constant_value(lo);
  if (ch == 1 && cl == 0)
    return sel;
  if (ch == 0 && cl == 1)
    return lnot(sel);
  if (ch == 0)
    return land(lnot(sel), lo);
  if (cl == 0)
    return land(sel, hi);
  if (ch == 1)
    return lor(sel, lo);
  if (cl == 1)
    return lor(lnot(sel), hi);
  return lor(land(sel, hi), land(lnot(sel), lo));
}

uint32_t CircuitBuilder::land_all(std::span<const uint32_t> ids) {
  uint32_t acc = constant(true);
  for (uint32_t id : ids)
    acc = land(acc, id);
  return acc;
}

uint32_t CircuitBuilder::lor_all(std::span<const uint32_t> ids) {
  uint32_t acc = constant(false);
  for (uint32_t id : ids)
    acc = lor(acc, id);
  return acc;
}

uint32_t CircuitBuilder::embed(const Circuit &c,
                               std::span<const uint32_t> inputs) {
  if (inputs.size() != c.num_inputs())
    fail(ErrorCode::kStructural, "embed: input wiring has wrong arity");
  const auto &gates = c.gates();
  std::vector<uint8_t> live(gates.size(), 0);
  live[c.output()] = 1;
  for (size_t i = gates.size(); i-- > 0;) {
    if (!live[i])
      continue;
    unsigned arity = op_arity(gates[i].op);
    if (arity >= 1)
      live[gates[i].a] = 1;
    if (arity == 2)
      live[gates[i].b] = 1;
  }
  std::vector<uint32_t> map(gates.size(), kNone);
  for (size_t i = 0; i < gates.size(); ++i) {
    if (!live[i])
      continue;
    const Gate &g = gates[i];
    switch (g.op) {
    case Op::kInput:
      map[i] = inputs[g.a];
      break;
    case Op::kConst0:
      map[i] = constant(false);
      break;
    case Op::kConst1:
      map[i] = constant(true);
      break;
    case Op::kNot:
      map[i] = lnot(map[g.a]);
      break;
    case Op::kAnd:
      map[i] = land(map[g.a], map[g.b]);
      break;
    case Op::kOr:
      map[i] = lor(map[g.a], map[g.b]);
      break;
    case Op::kXor:
      map[i] = lxor(map[g.a], map[g.b]);
      break;
    }
  }
  return map[c.output()];
}

uint32_t CircuitBuilder::embed(const Circuit &c) {
  if (c.num_inputs() != num_inputs_)
    fail(ErrorCode::kStructural, "embed: arity mismatch");
  std::vector<uint32_t> wiring(num_inputs_);
  for (uint32_t j = 0; j < num_inputs_; ++j)
    wiring[j] = input(j);
  return embed(c, wiring);
}

size_t CircuitBuilder::live_size(std::span<const uint32_t> outputs) const {
  std::vector<uint8_t> live(gates_.size(), 0);
  for (uint32_t o : outputs)
    live.at(o) = 1;
  size_t count = 0;
  for (size_t i = gates_.size(); i-- > 0;) {
    if (!live[i])
      continue;
    ++count;
    unsigned arity = op_arity(gates_[i].op);
    if (arity >= 1)
      live[gates_[i].a] = 1;
    if (arity == 2)
      live[gates_[i].b] = 1;
  }
  return count;
}

Circuit CircuitBuilder::build(uint32_t output) const {
  if (output >= gates_.size())
    fail(ErrorCode::kStructural, "build: output gate does not exist");
  std::vector<uint8_t> live(gates_.size(), 0);
  live[output] = 1;
  for (size_t i = gates_.size(); i-- > 0;) {
    if (!live[i])
      continue;
    unsigned arity = op_arity(gates_[i].op);
    if (arity >= 1)
      live[gates_[i].a] = 1;
    if (arity == 2)
      live[gates_[i].b] = 1;
  }
  std::vector<uint32_t> remap(gates_.size(), kNone);
  std::vector<Gate> out;
  for (size_t i = 0; i < gates_.size(); ++i) {
    if (!live[i])
      continue;
    Gate g = gates_[i];
    unsigned arity = op_arity(g.op);
    if (arity >= 1)
      g.a = remap[g.a];
    if (arity == 2)
      g.b = remap[g.b];
    remap[i] = uint32_t(out.size());
    out.push_back(g);
  }
  return Circuit(num_inputs_, std::move(out), remap[output]);
}

//===----------------------------------------------------------------------===//
// Closure operations
//===----------------------------------------------------------------------===//

Circuit sharpgap::negate(const Circuit &c) {
  std::vector<Gate> gates = c.gates();
  gates.push_back(Gate{Op::kNot, c.output(), 0});
  return Circuit(c.num_inputs(), std::move(gates),
                 uint32_t(gates.size() - 1));
}

static void require_same_arity(const Circuit &c1, const Circuit &c2,
                               const char *what) {
  if (c1.num_inputs() != c2.num_inputs())
    fail(ErrorCode::kStructural, std::string(what) + ": arity mismatch (" +
                                     std::to_string(c1.num_inputs()) +
                                     " vs " + std::to_string(c2.num_inputs()) +
                                     ")");
}

// Concatenates the gate lists of c1 and c2 and joins the outputs with op.
// Constant operands are folded at the top so restricted selections stay small.
static Circuit join2(const Circuit &c1, const Circuit &c2, Op op) {
  bool v1, v2;
  bool k1 = c1.is_constant(&v1), k2 = c2.is_constant(&v2);
  bool absorbing = op == Op::kOr;
  if (k1)
    return v1 == absorbing ? c1 : c2;
  if (k2)
    return v2 == absorbing ? c2 : c1;
  std::vector<Gate> gates;
  gates.reserve(c1.size() + c2.size() + 1);
  gates = c1.gates();
  uint32_t off = uint32_t(c1.size());
  for (Gate g : c2.gates()) {
    unsigned arity = op_arity(g.op);
    if (arity >= 1)
      g.a += off;
    if (arity == 2)
      g.b += off;
    gates.push_back(g);
  }
  gates.push_back(Gate{op, c1.output(), c2.output() + off});
  uint32_t out = uint32_t(gates.size() - 1);
  return Circuit(c1.num_inputs(), std::move(gates), out);
}

Circuit sharpgap::and2(const Circuit &c1, const Circuit &c2) {
  require_same_arity(c1, c2, "and2");
  return join2(c1, c2, Op::kAnd);
}

Circuit sharpgap::or2(const Circuit &c1, const Circuit &c2) {
  require_same_arity(c1, c2, "or2");
  return join2(c1, c2, Op::kOr);
}

Circuit sharpgap::xor_const(const Circuit &c, bool b) {
  return b ? negate(c) : c;
}

Circuit sharpgap::all_ones(uint32_t n) {
  return Circuit(n, {Gate{Op::kConst1, 0, 0}}, 0);
}

Circuit sharpgap::all_zeros(uint32_t n) {
  return Circuit(n, {Gate{Op::kConst0, 0, 0}}, 0);
}

Circuit sharpgap::parity_subset(uint32_t n, std::span<const uint32_t> subset) {
  if (subset.empty())
    return all_zeros(n);
  std::vector<Gate> gates;
  std::vector<uint8_t> seen(n, 0);
  for (uint32_t j : subset) {
    if (j >= n)
      fail(ErrorCode::kStructural, "parity_subset: index beyond arity");
    if (seen[j])
      fail(ErrorCode::kStructural, "parity_subset: repeated index");
    seen[j] = 1;
    gates.push_back(Gate{Op::kInput, j, 0});
    if (gates.size() > 1)
      gates.push_back(Gate{Op::kXor, uint32_t(gates.size() - 2),
                           uint32_t(gates.size() - 1)});
  }
  uint32_t out = uint32_t(gates.size() - 1);
  return Circuit(n, std::move(gates), out);
}

Circuit sharpgap::projection(uint32_t n, uint32_t index) {
  return Circuit(n, {Gate{Op::kInput, index, 0}}, 0);
}

Circuit sharpgap::widen(const Circuit &c, uint32_t num_inputs) {
  if (num_inputs < c.num_inputs())
    fail(ErrorCode::kStructural, "widen: cannot drop inputs");
  return Circuit(num_inputs, c.gates(), c.output());
}

Restrictor::Restrictor(Circuit c)
    : c_(std::move(c)), memo_(c_.size(), 0), stamp_(c_.size(), 0) {}

Circuit Restrictor::restrict(std::span<const int8_t> fixed) {
  if (fixed.size() != c_.num_inputs())
    fail(ErrorCode::kStructural, "restrict_inputs: wrong arity");
  uint32_t free_count = 0;
  for (int8_t v : fixed)
    free_count += v < 0;
  CircuitBuilder b(free_count);
  std::vector<uint32_t> wiring(c_.num_inputs(), kNone);
  std::vector<uint32_t> free_pos(c_.num_inputs(), kNone);
  for (uint32_t j = 0, next = 0; j < c_.num_inputs(); ++j)
    if (fixed[j] < 0)
      free_pos[j] = next++;

  if (++epoch_ == 0) {
    std::fill(stamp_.begin(), stamp_.end(), 0);
    epoch_ = 1;
  }
  const auto &gates = c_.gates();
  auto done = [&](uint32_t g) { return stamp_[g] == epoch_; };
  auto set = [&](uint32_t g, uint32_t id) {
    memo_[g] = id;
    stamp_[g] = epoch_;
  };
  struct Frame {
    uint32_t g;
    uint8_t phase;
  };
  std::vector<Frame> stack{{c_.output(), 0}};
  while (!stack.empty()) {
    Frame &f = stack.back();
    uint32_t g = f.g;
    if (f.phase == 0 && done(g)) {
      stack.pop_back();
      continue;
    }
    const Gate &gt = gates[g];
    switch (gt.op) {
    case Op::kInput:
      if (fixed[gt.a] < 0) {
        if (wiring[gt.a] == kNone)
          wiring[gt.a] = b.input(free_pos[gt.a]);
        set(g, wiring[gt.a]);
      } else {
        set(g, b.constant(fixed[gt.a] != 0));
      }
      stack.pop_back();
      continue;
    case Op::kConst0:
    case Op::kConst1:
      set(g, b.constant(gt.op == Op::kConst1));
      stack.pop_back();
      continue;
    case Op::kNot:
      if (f.phase == 0) {
        f.phase = 1;
        if (!done(gt.a))
          stack.push_back({gt.a, 0});
        continue;
      }
      set(g, b.lnot(memo_[gt.a]));
      stack.pop_back();
      continue;
    default:
      break;
    }
    uint32_t first = std::min(gt.a, gt.b), second = std::max(gt.a, gt.b);
    if (f.phase == 0) {
      f.phase = 1;
      if (!done(first))
        stack.push_back({first, 0});
      continue;
    }
    if (f.phase == 1) {
      int v = b.constant_value(memo_[first]);
      if ((gt.op == Op::kAnd && v == 0) || (gt.op == Op::kOr && v == 1)) {
        set(g, memo_[first]);
        stack.pop_back();
        continue;
      }
      f.phase = 2;
      if (!done(second))
        stack.push_back({second, 0});
      continue;
    }
    uint32_t x = memo_[gt.a], y = memo_[gt.b];
    set(g, gt.op == Op::kAnd  ? b.land(x, y)
           : gt.op == Op::kOr ? b.lor(x, y)
                              : b.lxor(x, y));
    stack.pop_back();
  }
  return b.build(memo_[c_.output()]);
}

Circuit Restrictor::fix_trailing(uint32_t width, uint64_t value) {
  if (width > c_.num_inputs())
    fail(ErrorCode::kStructural, "fix_trailing: width beyond arity");
  std::vector<int8_t> fixed(c_.num_inputs(), -1);
  uint32_t base = c_.num_inputs() - width;
  for (uint32_t k = 0; k < width; ++k)
    fixed[base + k] = int8_t((value >> k) & 1);
  return restrict(fixed);
}

Circuit sharpgap::restrict_inputs(const Circuit &c,
                                  std::span<const int8_t> fixed) {
  return Restrictor(c).restrict(fixed);
}

Circuit sharpgap::fix_trailing(const Circuit &c, uint32_t width,
                               uint64_t value) {
  return Restrictor(c).fix_trailing(width, value);
}

//===----------------------------------------------------------------------===//
// Evaluation
//===----------------------------------------------------------------------===//

static bool eval_with(const Circuit &c, auto &&input_bit) {
  const auto &gates = c.gates();
  std::vector<uint8_t> v(gates.size());
  for (size_t i = 0; i < gates.size(); ++i) {
    const Gate &g = gates[i];
    switch (g.op) {
    case Op::kAnd:
      v[i] = v[g.a] & v[g.b];
      break;
    case Op::kOr:
      v[i] = v[g.a] | v[g.b];
      break;
    case Op::kXor:
      v[i] = v[g.a] ^ v[g.b];
      break;
    case Op::kNot:
      v[i] = !v[g.a];
      break;
    case Op::kConst0:
      v[i] = 0;
      break;
    case Op::kConst1:
      v[i] = 1;
      break;
    case Op::kInput:
      v[i] = input_bit(g.a);
      break;
    }
  }
  return v[c.output()];
}

bool sharpgap::evaluate(const Circuit &c, std::span<const uint8_t> x) {
  if (x.size() != c.num_inputs())
    fail(ErrorCode::kStructural, "evaluate: assignment has " +
                                     std::to_string(x.size()) +
                                     " bits, circuit has " +
                                     std::to_string(c.num_inputs()) +
                                     " inputs");
  return eval_with(c, [&](uint32_t j) { return x[j] & 1; });
}

bool sharpgap::evaluate_index(const Circuit &c, uint64_t assignment) {
  return eval_with(c,
                   [&](uint32_t j) { return uint8_t((assignment >> j) & 1); });
}

static constexpr uint64_t kInputPattern[6] = {
    0xAAAAAAAAAAAAAAAAULL, 0xCCCCCCCCCCCCCCCCULL, 0xF0F0F0F0F0F0F0F0ULL,
    0xFF00FF00FF00FF00ULL, 0xFFFF0000FFFF0000ULL, 0xFFFFFFFF00000000ULL};

BitslicedEvaluator::BitslicedEvaluator(const Circuit &c)
    : circuit_(c), scratch_(c.size() * kLanes) {
  if (c.num_inputs() > 63)
    fail(ErrorCode::kBudget, "bitsliced evaluation supports at most 63 inputs");
}

void BitslicedEvaluator::run(uint64_t base, unsigned lanes) {
  const auto &gates = circuit_.gates();
  uint64_t *v = scratch_.data();
  for (size_t i = 0; i < gates.size(); ++i) {
    const Gate &g = gates[i];
    uint64_t *o = v + i * kLanes;
    const uint64_t *a = v + size_t(g.a) * kLanes;
    const uint64_t *b = v + size_t(g.b) * kLanes;
    switch (g.op) {
    case Op::kAnd:
      for (unsigned l = 0; l < kLanes; ++l)
        o[l] = a[l] & b[l];
      break;
    case Op::kOr:
      for (unsigned l = 0; l < kLanes; ++l)
        o[l] = a[l] | b[l];
      break;
    case Op::kXor:
      for (unsigned l = 0; l < kLanes; ++l)
        o[l] = a[l] ^ b[l];
      break;
    case Op::kNot:
      for (unsigned l = 0; l < kLanes; ++l)
        o[l] = ~a[l];
      break;
    case Op::kConst0:
      for (unsigned l = 0; l < kLanes; ++l)
        o[l] = 0;
      break;
    case Op::kConst1:
      for (unsigned l = 0; l < kLanes; ++l)
        o[l] = ~0ULL;
      break;
    case Op::kInput:
      if (g.a < 6) {
        for (unsigned l = 0; l < kLanes; ++l)
          o[l] = kInputPattern[g.a];
      } else {
        for (unsigned l = 0; l < lanes; ++l)
          o[l] = ((base + 64 * uint64_t(l)) >> g.a) & 1 ? ~0ULL : 0;
      }
      break;
    }
  }
}

TruthSlice BitslicedEvaluator::slice(uint64_t block_base) {
  uint32_t n = circuit_.num_inputs();
  TruthSlice s;
  s.block_base = block_base;
  if (n < 6) {
    if (block_base != 0)
      fail(ErrorCode::kOutOfRange, "block_base beyond assignment space");
    s.width = 1u << n;
  } else {
    if (block_base % 64 != 0)
      fail(ErrorCode::kInvalidArgument, "block_base is not word-aligned");
    if (n < 64 && block_base >= (uint64_t(1) << n))
      fail(ErrorCode::kOutOfRange, "block_base beyond assignment space");
  }
  run(block_base, 1);
  s.word = scratch_[size_t(circuit_.output()) * kLanes];
  if (s.width < 64)
    s.word &= (uint64_t(1) << s.width) - 1;
  return s;
}

uint64_t BitslicedEvaluator::count_range(uint64_t begin, uint64_t end) {
  uint32_t n = circuit_.num_inputs();
  const uint64_t *out = scratch_.data() + size_t(circuit_.output()) * kLanes;
  if (n < 6) {
    if (begin != 0 || end != (uint64_t(1) << n))
      fail(ErrorCode::kInvalidArgument,
           "narrow circuits are counted over the whole space only");
    run(0, 1);
    return std::popcount(out[0] & ((uint64_t(1) << (1u << n)) - 1));
  }
  if (begin % 64 || end % 64 || begin > end)
    fail(ErrorCode::kInvalidArgument, "count_range bounds not word-aligned");
  uint64_t total = 0;
  for (uint64_t base = begin; base < end; base += 64 * kLanes) {
    unsigned lanes = unsigned(std::min<uint64_t>(kLanes, (end - base) / 64));
    run(base, lanes);
    for (unsigned l = 0; l < lanes; ++l)
      total += std::popcount(out[l]);
  }
  return total;
}

uint64_t BitslicedEvaluator::count_all() {
  uint32_t n = circuit_.num_inputs();
  return count_range(0, uint64_t(1) << n);
}

TruthSlice sharpgap::evaluate_bitsliced(const Circuit &c, uint64_t block_base) {
  BitslicedEvaluator ev(c);
  return ev.slice(block_base);
}

//===----------------------------------------------------------------------===//
// Netlist text format
//===----------------------------------------------------------------------===//

void sharpgap::write_netlist(std::ostream &os, const Circuit &c) {
  os << "inputs " << c.num_inputs() << '\n';
  const auto &gates = c.gates();
  for (size_t i = 0; i < gates.size(); ++i) {
    const Gate &g = gates[i];
    os << 'g' << i << " = " << op_name(g.op);
    if (g.op == Op::kInput)
      os << " x" << (g.a + 1);
    unsigned arity = op_arity(g.op);
    if (arity >= 1)
      os << " g" << g.a;
    if (arity == 2)
      os << " g" << g.b;
    os << '\n';
  }
  os << "output g" << c.output() << '\n';
}

std::string sharpgap::format_netlist(const Circuit &c) {
  std::ostringstream os;
  write_netlist(os, c);
  return os.str();
}

namespace {

[[noreturn]] void parse_error(size_t line_no, const std::string &msg) {
  fail(ErrorCode::kParse, "netlist line " + std::to_string(line_no) + ": " +
                              msg);
}

std::vector<std::string> tokenize(const std::string &line) {
  std::string body = line.substr(0, line.find('#'));
  std::istringstream ss(body);
  std::vector<std::string> toks;
  for (std::string t; ss >> t;)
    toks.push_back(t);
  return toks;
}

uint64_t parse_number(const std::string &s, size_t line_no) {
  if (s.empty() || s.size() > 18 ||
      s.find_first_not_of("0123456789") != std::string::npos)
    parse_error(line_no, "expected a number, got '" + s + "'");
  return std::stoull(s);
}

bool parse_op(const std::string &s, Op &op) {
  static const Op kOps[] = {Op::kAnd,    Op::kOr,     Op::kNot,  Op::kXor,
                            Op::kConst0, Op::kConst1, Op::kInput};
  for (Op o : kOps)
    if (s == op_name(o)) {
      op = o;
      return true;
    }
  return false;
}

} // namespace

Circuit sharpgap::read_netlist(std::istream &is, size_t &line_no) {
  std::string line;
  std::vector<std::string> toks;
  while (toks.empty()) {
    if (!std::getline(is, line))
      fail(ErrorCode::kParse, "netlist: missing 'inputs' header");
    ++line_no;
    toks = tokenize(line);
  }
  if (toks.size() != 2 || toks[0] != "inputs")
    parse_error(line_no, "expected 'inputs <n>'");
  uint64_t n = parse_number(toks[1], line_no);
  if (n > (1u << 24))
    parse_error(line_no, "input count too large");

  std::vector<Gate> gates;
  std::unordered_map<uint64_t, uint32_t> ids;
  std::vector<uint32_t> implicit_inputs(n, kNone);

  auto operand = [&](const std::string &tok) -> uint32_t {
    if (tok.size() < 2)
      parse_error(line_no, "bad operand '" + tok + "'");
    uint64_t v = parse_number(tok.substr(1), line_no);
    if (tok[0] == 'g') {
      auto it = ids.find(v);
      if (it == ids.end())
        parse_error(line_no, "operand " + tok + " used before definition");
      return it->second;
    }
    if (tok[0] == 'x') {
      if (v < 1 || v > n)
        parse_error(line_no, "input " + tok + " out of range");
      uint32_t &slot = implicit_inputs[v - 1];
      if (slot == kNone) {
        slot = uint32_t(gates.size());
        gates.push_back(Gate{Op::kInput, uint32_t(v - 1), 0});
      }
      return slot;
    }
    parse_error(line_no, "bad operand '" + tok + "'");
  };

  while (std::getline(is, line)) {
    ++line_no;
    toks = tokenize(line);
    if (toks.empty())
      continue;
    if (toks[0] == "output") {
      if (toks.size() != 2 || toks[1].size() < 2 || toks[1][0] != 'g')
        parse_error(line_no, "expected 'output g<id>'");
      auto it = ids.find(parse_number(toks[1].substr(1), line_no));
      if (it == ids.end())
        parse_error(line_no, "output gate undefined");
      try {
        return Circuit(uint32_t(n), std::move(gates), it->second);
      } catch (const Error &e) {
        parse_error(line_no, e.what());
      }
    }
    if (toks.size() < 3 || toks[1] != "=" || toks[0].size() < 2 ||
        toks[0][0] != 'g')
      parse_error(line_no, "expected 'g<id> = <OP> ...'");
    uint64_t id = parse_number(toks[0].substr(1), line_no);
    if (ids.count(id))
      parse_error(line_no, "gate g" + std::to_string(id) + " redefined");
    Op op;
    if (!parse_op(toks[2], op))
      parse_error(line_no, "unknown op '" + toks[2] + "'");
    size_t want = op == Op::kInput ? 1 : op_arity(op);
    if (toks.size() != 3 + want)
      parse_error(line_no, std::string(op_name(op)) + " takes " +
                               std::to_string(want) + " operand(s)");
    Gate g{op, 0, 0};
    if (op == Op::kInput) {
      const std::string &t = toks[3];
      if (t.size() < 2 || t[0] != 'x')
        parse_error(line_no, "INPUT expects x<idx>");
      uint64_t v = parse_number(t.substr(1), line_no);
      if (v < 1 || v > n)
        parse_error(line_no, "input " + t + " out of range");
      g.a = uint32_t(v - 1);
    } else {
      if (want >= 1)
        g.a = operand(toks[3]);
      if (want == 2)
        g.b = operand(toks[4]);
    }
    ids.emplace(id, uint32_t(gates.size()));
    gates.push_back(g);
  }
  fail(ErrorCode::kParse, "netlist: missing 'output' line");
}

Circuit sharpgap::parse_netlist(const std::string &text) {
  std::istringstream is(text);
  size_t line_no = 0;
  Circuit c = read_netlist(is, line_no);
  std::string line;
  while (std::getline(is, line)) {
    ++line_no;
    if (!tokenize(line).empty())
      parse_error(line_no, "trailing content after 'output'");
  }
  return c;
}
