// SPDX-License-Identifier: Apache-2.0
#include "sharpgap/sharpgap.h"

#include "sharpgap/error.hpp"
#include "sharpgap/selftest.hpp"
#include "sharpgap/verifier.hpp"

#include <cstdlib>
#include <cstring>
#include <new>

using namespace sharpgap;

struct sg_circuit {
  Circuit c;
};
struct sg_profile {
  PipelineProfile p;
};
struct sg_verdict {
  Verdict v;
};

namespace {

thread_local std::string last_error;

char *dup_string(const std::string &s) {
  char *out = static_cast<char *>(std::malloc(s.size() + 1));
  if (!out)
    throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename F> sg_status guarded(F &&f) {
  try {
    f();
    last_error.clear();
    return SG_OK;
  } catch (const Error &e) {
    last_error = e.what();
    return static_cast<sg_status>(static_cast<int>(e.code()));
  } catch (const std::exception &e) {
    last_error = e.what();
    return SG_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown failure";
    return SG_ERR_INTERNAL;
  }
}

void require(const void *p, const char *what) {
  if (!p)
    fail(ErrorCode::kInvalidArgument, std::string(what) + " is null");
}

} // namespace

extern "C" {

const char *sg_version(void) { return "0.1.0"; }

const char *sg_status_name(sg_status status) {
  if (status == SG_OK)
    return "ok";
  if (status == SG_ERR_INTERNAL)
    return "internal";
  if (status >= SG_ERR_STRUCTURAL && status <= SG_ERR_IO)
    return to_string(static_cast<ErrorCode>(static_cast<int>(status)));
  return "unknown";
}

const char *sg_last_error(void) { return last_error.c_str(); }

void sg_string_free(char *s) { std::free(s); }

sg_status sg_circuit_parse(const char *netlist, sg_circuit **out) {
  return guarded([&] {
    require(netlist, "netlist");
    require(out, "out");
    *out = new sg_circuit{parse_netlist(netlist)};
  });
}

sg_status sg_circuit_format(const sg_circuit *c, char **out) {
  return guarded([&] {
    require(c, "circuit");
    require(out, "out");
    *out = dup_string(format_netlist(c->c));
  });
}

sg_status sg_circuit_info(const sg_circuit *c, uint32_t *num_inputs,
                          uint64_t *num_gates) {
  return guarded([&] {
    require(c, "circuit");
    if (num_inputs)
      *num_inputs = c->c.num_inputs();
    if (num_gates)
      *num_gates = c->c.size();
  });
}

void sg_circuit_free(sg_circuit *c) { delete c; }

sg_status sg_count(const sg_circuit *c, const int8_t *fixed, size_t fixed_len,
                   uint32_t budget, char **count) {
  return guarded([&] {
    require(c, "circuit");
    require(count, "count");
    Circuit target = c->c;
    if (fixed_len) {
      require(fixed, "fixed");
      if (fixed_len != target.num_inputs())
        fail(ErrorCode::kInvalidArgument,
             "fixed has " + std::to_string(fixed_len) + " entries, circuit has " +
                 std::to_string(target.num_inputs()) + " inputs");
      for (size_t j = 0; j < fixed_len; ++j)
        if (fixed[j] < -1 || fixed[j] > 1)
          fail(ErrorCode::kInvalidArgument, "fixed entries must be -1, 0 or 1");
      target = restrict_inputs(target, {fixed, fixed_len});
    }
    *count = dup_string(to_decimal(count_sat(target, budget).count));
  });
}

sg_status sg_amplify(const sg_circuit *c, uint32_t g, uint32_t psi, uint32_t t,
                     double max_lambda, uint64_t seed, sg_circuit **out,
                     char **provenance) {
  return guarded([&] {
    require(c, "circuit");
    require(out, "out");
    HittingParams hp;
    hp.psi = psi;
    hp.t = t;
    hp.max_lambda = max_lambda;
    hp.seed = seed;
    AmplifiedCircuit a = amplify_gap(c->c, g, hp);
    if (provenance)
      *provenance = dup_string(a.provenance());
    *out = new sg_circuit{a.circuit};
  });
}

sg_status sg_code_build(uint32_t n, uint64_t seed, uint32_t c,
                        char **code_text) {
  return guarded([&] {
    require(code_text, "code_text");
    CodeParams cp;
    cp.c = c;
    *code_text = dup_string(format_code(build_code(n, seed, cp)));
  });
}

sg_status sg_reduce(const sg_circuit *c, uint32_t code_c, uint64_t code_seed,
                    uint32_t repeat_k, char **dimacs) {
  return guarded([&] {
    require(c, "circuit");
    require(dimacs, "dimacs");
    CodeParams cp;
    cp.c = code_c;
    LinearCode code = build_code(c->c.num_inputs(), code_seed, cp);
    CspReduction red = circuit_to_csp(c->c, code);
    CnfInstance f =
        repeat_k == 1 ? red.cnf : serial_repeat(red.cnf, repeat_k);
    *dimacs = dup_string(format_dimacs(f));
  });
}

sg_status sg_fglss(const char *dimacs, char **gis) {
  return guarded([&] {
    require(dimacs, "dimacs");
    require(gis, "gis");
    *gis = dup_string(format_gis(fglss_build(parse_dimacs(dimacs))));
  });
}

sg_profile *sg_profile_new(void) { return new (std::nothrow) sg_profile{}; }

sg_status sg_profile_set(sg_profile *p, const char *key, const char *value) {
  return guarded([&] {
    require(p, "profile");
    require(key, "key");
    require(value, "value");
    if (!profile_set(p->p, key, value))
      fail(ErrorCode::kInvalidArgument,
           std::string("unknown profile key '") + key + "'");
  });
}

void sg_profile_free(sg_profile *p) { delete p; }

sg_status sg_e2e(const sg_circuit *d_prime, const sg_profile *p,
                 sg_verdict **out) {
  return guarded([&] {
    require(d_prime, "circuit");
    require(out, "out");
    PipelineProfile prof = p ? p->p : PipelineProfile{};
    *out = new sg_verdict{run_e2e_prove(d_prime->c, prof)};
  });
}

sg_status sg_prove(const sg_circuit *d_prime, const sg_profile *p,
                   char **witness, sg_verdict **out) {
  return guarded([&] {
    require(d_prime, "circuit");
    require(witness, "witness");
    PipelineProfile prof = p ? p->p : PipelineProfile{};
    Pipeline pipe = build_pipeline(d_prime->c, prof);
    Witness w = build_honest_witness(pipe);
    std::string text = format_witness_file(pipe, w.u);
    if (out) {
      ExhaustiveOracle oracle(prof.count_budget);
      *out = new sg_verdict{verify_witness(pipe, w.u, oracle)};
    }
    *witness = dup_string(text);
  });
}

sg_status sg_verify(const sg_circuit *d_prime, const char *witness,
                    sg_verdict **out) {
  return guarded([&] {
    require(d_prime, "circuit");
    require(witness, "witness");
    require(out, "out");
    *out = new sg_verdict{verify_witness_file(d_prime->c, witness)};
  });
}

int sg_verdict_accepted(const sg_verdict *v) {
  return v && v->v.decision == Decision::kUnsatVerified;
}

sg_status sg_verdict_json(const sg_verdict *v, char **json) {
  return guarded([&] {
    require(v, "verdict");
    require(json, "json");
    *json = dup_string(v->v.to_json());
  });
}

void sg_verdict_free(sg_verdict *v) { delete v; }

sg_status sg_selftest(uint64_t seed, int *passed, char **report) {
  return guarded([&] {
    SelftestResult r = run_selftest(seed);
    if (passed)
      *passed = r.ok ? 1 : 0;
    if (report)
      *report = dup_string(r.report);
  });
}

} // extern "C"
