// SPDX-License-Identifier: Apache-2.0
//
// The #SAT-driven GAP-UNSAT verifier and the end-to-end pipeline:
//   D' --amplify--> D --ENC + CSP--> F --repeat--> F' --FGLSS--> G
// A witness is an EMAJ circuit U over (x, i) claimed to compute NOT A(x, i),
// where A(x, .) is the characteristic vector of an independent set of G
// consistent with pi_x. R = emaj_to_sum(U) is checked by three counting
// phases and the final sum is compared with 2^n * kappa.
//
// Input layout of U and R: x occupies inputs 0..n-1, the vertex index i the
// next index_width inputs, little-endian.
#pragma once

#include "sharpgap/amplify.hpp"
#include "sharpgap/codec.hpp"
#include "sharpgap/fglss.hpp"
#include "sharpgap/reduce.hpp"
#include "sharpgap/sharp_sat.hpp"
#include "sharpgap/symrep.hpp"

#include <optional>
#include <string>

namespace sharpgap {

//===----------------------------------------------------------------------===//
// Parameter planning
//===----------------------------------------------------------------------===//

struct ParameterPlan {
  uint64_t m = 0;       // base clause count
  uint32_t k = 0;       // soundness exponent, h = 2^k
  uint64_t k_prime = 0; // repetitions the 1/m-gap CSP needs: ceil(k m ln 2)
  uint64_t g = 0;       // amplifier gap
  uint64_t kappa = 0;   // group count
  uint32_t t = 1;       // witness width: bound on R(x, i)
  uint64_t n2 = 0;      // vertex count
  uint32_t safety = 2;

  BigInt h() const { return pow2(k); }
  /// safety * (t kappa g + t n2 h) < kappa h g, i.e. the strict inequality
  /// t kappa / h + t n2 / g < kappa with the safety factor applied.
  bool separation_holds() const;
  std::string describe() const;
};

struct PlanBudget {
  uint32_t max_k = 64;
  uint32_t max_log_g = 62;
};

/// Smallest k, then smallest power-of-two g, meeting separation_holds().
/// Throws Error(kPlanning) when none exists within the budget.
ParameterPlan plan_parameters(uint64_t m, uint64_t kappa, uint32_t t,
                              uint64_t n2, const PlanBudget &budget = {});

//===----------------------------------------------------------------------===//
// Pipeline
//===----------------------------------------------------------------------===//

/// Concrete sizes for every stage. The defaults are a desk-scale profile:
/// the realized g and k' are far below what the plan asks for, which the
/// verdict reports as separation_certified = false.
struct PipelineProfile {
  uint32_t g = 2;
  uint32_t psi = 2;
  uint32_t walk_t = 2;
  double max_lambda = 0.99;
  uint64_t hit_seed = 0;
  uint32_t code_c = 2;
  uint64_t code_seed = 0;
  uint32_t repeat_k = 1;
  RepeatMode repeat_mode;
  /// Subcircuits emitted by the honest prover (1 = single mux circuit).
  uint32_t witness_t = 1;
  /// Largest accepted witness width.
  uint32_t plan_t = 1;
  uint32_t count_budget = 28;
};

/// Sets one profile field by its witness-file key (g, psi, walk_t,
/// max_lambda, hit_seed, code_c, code_seed, repeat_k, repeat_mode,
/// repeat_seed, repeat_count, repeat_budget, witness_t, plan_t,
/// count_budget). Returns false for an unknown key; throws
/// Error(kInvalidArgument) for a malformed value.
bool profile_set(PipelineProfile &profile, const std::string &key,
                 const std::string &value);

struct Pipeline {
  PipelineProfile profile;
  Circuit d_prime;
  AmplifiedCircuit amplified;
  LinearCode code;
  CspReduction base;
  CnfInstance repeated;
  GisInstance gis;
  ParameterPlan plan;
  uint32_t index_width = 0;

  const Circuit &d() const { return amplified.circuit; }
  uint32_t n() const { return amplified.n; }
  uint64_t kappa() const { return gis.num_groups; }
  uint64_t n2() const { return gis.num_vertices(); }
};

/// Runs amplify, code construction, reduction, repetition and FGLSS. Errors
/// are rethrown with the failing stage's name prefixed.
Pipeline build_pipeline(const Circuit &d_prime, const PipelineProfile &profile);

//===----------------------------------------------------------------------===//
// Witnesses
//===----------------------------------------------------------------------===//

struct Witness {
  EmajCircuit u;
  SumCircuit r;
};

/// max over inputs of R = (sum D_i - u)^2, i.e. max(u, t - u)^2.
uint64_t witness_width(const EmajCircuit &u);

/// A(x, i) = [vertex i agrees with the extracted assignment for x] as one
/// circuit over (x, i): a multiplexer tree over the index bits whose leaves
/// match each vertex's literals against the extractor's variable logic.
Circuit honest_selection(const Pipeline &p);

/// U = EMAJ(NOT A; u = 1). With profile.witness_t = t > 1 the subcircuits are
/// NOT A AND x_1, NOT A AND NOT x_1 and t - 2 constant-zero pads, still u = 1.
Witness build_honest_witness(const Pipeline &p);
Witness witness_from_emaj(EmajCircuit u);

//===----------------------------------------------------------------------===//
// Verification
//===----------------------------------------------------------------------===//

/// Restrictions R_j(., i) of every term, computed on demand and cached.
class TermRestrictions {
public:
  TermRestrictions(const SumCircuit &r, uint32_t index_width, uint64_t n2);

  const Circuit &get(size_t term, uint64_t vertex);
  size_t num_terms() const { return signs_.size(); }
  int sign(size_t term) const { return signs_[term]; }

private:
  std::vector<Restrictor> restrictors_; // one per distinct term circuit
  std::vector<size_t> slot_;            // term -> restrictor
  std::vector<int> signs_;
  uint32_t width_;
  uint64_t n2_;
  Restrictor mask_;
  std::vector<std::vector<std::optional<Circuit>>> cache_;
};

/// sum over edges (i1, i2) and term pairs of sign * #(R_j1(., i1) AND R_j2(., i2)).
BigInt verify_independence(TermRestrictions &terms, const GisInstance &g,
                           CountingOracle &oracle);
/// sum over vertices i, (j', b) in S_i and terms j of
/// sign * #((ENC_j' XOR b) AND R_j(., i)).
BigInt verify_consistency(TermRestrictions &terms, const GisInstance &g,
                          const LinearCode &code, CountingOracle &oracle);
/// sum over terms j and vertices i of sign * #R_j(., i).
BigInt final_sum(TermRestrictions &terms, const GisInstance &g,
                 CountingOracle &oracle);

enum class Decision { kUnsatVerified, kReject };
const char *to_string(Decision d);

struct Verdict {
  Decision decision = Decision::kReject;
  std::string reason;
  uint64_t witness_width = 0;
  size_t witness_terms = 0;
  std::optional<BigInt> independence;
  std::optional<BigInt> consistency;
  std::optional<BigInt> final_total;
  BigInt threshold; // 2^n * kappa
  uint64_t calls_independence = 0;
  uint64_t calls_consistency = 0;
  uint64_t calls_final = 0;

  // Realized pipeline sizes next to the plan.
  ParameterPlan plan;
  uint32_t n = 0;
  uint64_t kappa = 0;
  uint64_t n2 = 0;
  uint64_t edges = 0;
  uint64_t base_clauses = 0;
  uint32_t realized_g = 0;
  uint32_t realized_k_prime = 0;
  /// True when the realized g and k' meet the plan.
  bool separation_certified = false;

  std::string to_json() const;
};

struct VerifyOptions {
  /// Skip the remaining phases once a zero-check fails.
  bool stop_at_first_failure = true;
};

/// Checks the witness width, runs the three phases and decides.
Verdict verify_witness(const Pipeline &p, const EmajCircuit &u,
                       CountingOracle &oracle, const VerifyOptions &opts = {});

/// prove mode: build the pipeline and the honest witness, then verify.
Verdict run_e2e_prove(const Circuit &d_prime, const PipelineProfile &profile,
                      const VerifyOptions &opts = {});
/// verify mode: check an externally supplied witness.
Verdict run_e2e_verify(const Circuit &d_prime, const PipelineProfile &profile,
                       const EmajCircuit &u, const VerifyOptions &opts = {});

//===----------------------------------------------------------------------===//
// Witness files
//===----------------------------------------------------------------------===//

/// `# plan key=value ...` lines echoing the profile and the realized sizes,
/// then the EMAJ serialization of U.
std::string format_witness_file(const Pipeline &p, const EmajCircuit &u);

struct WitnessFile {
  PipelineProfile profile;
  uint32_t n = 0;
  uint64_t kappa = 0;
  uint64_t n2 = 0;
  uint32_t index_width = 0;
  EmajCircuit u;
};

WitnessFile parse_witness_file(const std::string &text);

/// Rebuilds the pipeline from the echoed profile, cross-checks the echoed
/// sizes (Error(kInvalidWitness) on mismatch) and verifies.
Verdict verify_witness_file(const Circuit &d_prime, const std::string &text,
                            const VerifyOptions &opts = {});

//===----------------------------------------------------------------------===//
// Perturbed witnesses
//===----------------------------------------------------------------------===//

struct Mutant {
  std::string name;
  EmajCircuit u;
};

/// Deterministic perturbations of the honest witness: inverted selection,
/// added and dropped vertices (always and on an input slice), the
/// output-clause vertex forced in, a selection borrowed from a neighboring
/// input, gate negations inside the selection logic, an over-wide amplitude
/// copy, and the two-way splitter.
std::vector<Mutant> witness_mutations(const Pipeline &p, uint64_t seed,
                                      size_t count);

} // namespace sharpgap
