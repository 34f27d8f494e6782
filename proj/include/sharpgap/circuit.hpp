// SPDX-License-Identifier: Apache-2.0
//
// Boolean circuit IR. A Circuit is an immutable DAG of gates stored in
// topological order; gate ids are positions in that order. Input j of an
// assignment index a is bit j of a (input 0 is the least significant bit).
#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace sharpgap {

enum class Op : uint8_t { kAnd, kOr, kNot, kXor, kConst0, kConst1, kInput };

const char *op_name(Op op);
/// Number of gate operands taken by \p op.
unsigned op_arity(Op op);

/// For kInput gates `a` holds the 0-based input position; for the other ops
/// `a` and `b` are operand gate ids (unused slots are 0).
struct Gate {
  Op op = Op::kConst0;
  uint32_t a = 0;
  uint32_t b = 0;

  bool operator==(const Gate &) const = default;
};

class Circuit {
public:
  /// The CONST0 circuit over zero inputs.
  Circuit();
  /// Validates topology and arity; throws Error(kStructural) on violation.
  Circuit(uint32_t num_inputs, std::vector<Gate> gates, uint32_t output);

  uint32_t num_inputs() const { return num_inputs_; }
  const std::vector<Gate> &gates() const { return *gates_; }
  uint32_t output() const { return output_; }
  size_t size() const { return gates_->size(); }

  /// True when the output gate is a constant; \p value receives it.
  bool is_constant(bool *value = nullptr) const;

  bool operator==(const Circuit &other) const;

private:
  uint32_t num_inputs_ = 0;
  std::shared_ptr<const std::vector<Gate>> gates_;
  uint32_t output_ = 0;
};

//===----------------------------------------------------------------------===//
// Construction
//===----------------------------------------------------------------------===//

/// Incremental builder with constant folding and structural hashing. build()
/// drops gates that do not reach the chosen output.
class CircuitBuilder {
public:
  explicit CircuitBuilder(uint32_t num_inputs);

  uint32_t num_inputs() const { return num_inputs_; }

  uint32_t input(uint32_t index);
  uint32_t constant(bool value);
  uint32_t land(uint32_t a, uint32_t b);
  uint32_t lor(uint32_t a, uint32_t b);
  uint32_t lnot(uint32_t a);
  uint32_t lxor(uint32_t a, uint32_t b);
  /// sel ? hi : lo
  uint32_t mux(uint32_t sel, uint32_t hi, uint32_t lo);
  /// Conjunction / disjunction of a list; empty lists give the neutral constant.
  uint32_t land_all(std::span<const uint32_t> ids);
  uint32_t lor_all(std::span<const uint32_t> ids);

  /// Copies \p c into the builder with input j wired to gate inputs[j].
  uint32_t embed(const Circuit &c, std::span<const uint32_t> inputs);
  /// embed() with the identity wiring; arities must match.
  uint32_t embed(const Circuit &c);

  /// Constant value of gate \p id, or -1 when not constant.
  int constant_value(uint32_t id) const;

  Circuit build(uint32_t output) const;
  /// Number of gates reachable from any of \p outputs.
  size_t live_size(std::span<const uint32_t> outputs) const;

private:
  uint32_t add(Op op, uint32_t a, uint32_t b);

  uint32_t num_inputs_;
  std::vector<Gate> gates_;
  std::vector<uint32_t> input_ids_;
  uint32_t const_ids_[2];
  std::unordered_map<uint64_t, uint32_t> strash_;
};

//===----------------------------------------------------------------------===//
// Closure operations
//===----------------------------------------------------------------------===//

Circuit negate(const Circuit &c);
/// and2/or2 share the inputs of both operands; constant operands fold.
Circuit and2(const Circuit &c1, const Circuit &c2);
Circuit or2(const Circuit &c1, const Circuit &c2);
/// c XOR b for a constant bit b.
Circuit xor_const(const Circuit &c, bool b);
Circuit all_ones(uint32_t n);
Circuit all_zeros(uint32_t n);
/// XOR of the inputs at the given 0-based positions; the empty subset is CONST0.
Circuit parity_subset(uint32_t n, std::span<const uint32_t> subset);
/// The projection x_index over n inputs.
Circuit projection(uint32_t n, uint32_t index);
/// Same function over a larger input count; the extra inputs are ignored.
Circuit widen(const Circuit &c, uint32_t num_inputs);

/// Fixes some inputs to constants. fixed[j] is 0, 1, or -1 (free). The
/// result's inputs are the free inputs in their original order.
Circuit restrict_inputs(const Circuit &c, std::span<const int8_t> fixed);
/// Binds the trailing index inputs of \p c to the little-endian bits of
/// \p value, leaving the leading num_inputs - width inputs free.
Circuit fix_trailing(const Circuit &c, uint32_t width, uint64_t value);

/// Repeated restrictions of one circuit. Only gates the output still depends
/// on are visited: AND/OR operands are taken lowest id first and the second
/// is skipped once the first decides the gate.
class Restrictor {
public:
  explicit Restrictor(Circuit c);

  const Circuit &circuit() const { return c_; }
  Circuit restrict(std::span<const int8_t> fixed);
  Circuit fix_trailing(uint32_t width, uint64_t value);

private:
  Circuit c_;
  std::vector<uint32_t> memo_;
  std::vector<uint32_t> stamp_;
  uint32_t epoch_ = 0;
};

//===----------------------------------------------------------------------===//
// Evaluation
//===----------------------------------------------------------------------===//

bool evaluate(const Circuit &c, std::span<const uint8_t> x);
/// Evaluates on the assignment whose bit j is input j.
bool evaluate_index(const Circuit &c, uint64_t assignment);

/// Word-packed outputs for `width` consecutive assignments from block_base.
struct TruthSlice {
  uint64_t word = 0;
  uint64_t block_base = 0;
  uint32_t width = 64;
};

/// Reusable 64-way bitsliced evaluator. Holds scratch sized to the circuit so
/// repeated block evaluations do not allocate.
class BitslicedEvaluator {
public:
  static constexpr unsigned kLanes = 8;

  explicit BitslicedEvaluator(const Circuit &c);

  /// One word of outputs. block_base must be a multiple of 64 (or 0 when the
  /// circuit has fewer than 6 inputs, in which case the slice is narrower).
  TruthSlice slice(uint64_t block_base);
  /// Number of satisfying assignments with index in [begin, end); both
  /// bounds must be multiples of 64 unless the whole space is smaller.
  uint64_t count_range(uint64_t begin, uint64_t end);
  uint64_t count_all();

private:
  void run(uint64_t base, unsigned lanes);

  Circuit circuit_;
  std::vector<uint64_t> scratch_;
};

TruthSlice evaluate_bitsliced(const Circuit &c, uint64_t block_base);

//===----------------------------------------------------------------------===//
// Netlist text format
//===----------------------------------------------------------------------===//

std::string format_netlist(const Circuit &c);
void write_netlist(std::ostream &os, const Circuit &c);
Circuit parse_netlist(const std::string &text);
/// Reads one netlist block (through its `output` line) from \p is.
/// \p line_no tracks the current line for diagnostics.
Circuit read_netlist(std::istream &is, size_t &line_no);

} // namespace sharpgap
