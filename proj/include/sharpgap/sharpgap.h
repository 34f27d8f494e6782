/* SPDX-License-Identifier: Apache-2.0
 *
 * C interface to libsharpgap. Objects are opaque handles released with their
 * *_free function. Every call returns an sg_status; on failure the message is
 * available from sg_last_error() on the calling thread. Strings returned
 * through char** out-parameters are owned by the caller and released with
 * sg_string_free().
 */
#ifndef SHARPGAP_H
#define SHARPGAP_H

#include <stddef.h>
#include <stdint.h>

#if defined(SG_BUILDING)
#define SG_API __attribute__((visibility("default")))
#else
#define SG_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sg_status {
  SG_OK = 0,
  SG_ERR_STRUCTURAL = 1,
  SG_ERR_PARSE = 2,
  SG_ERR_BUDGET = 3,
  SG_ERR_CONSTRUCTION = 4,
  SG_ERR_PROMISE_VIOLATION = 5,
  SG_ERR_INVALID_WITNESS = 6,
  SG_ERR_PLANNING = 7,
  SG_ERR_UNSUPPORTED = 8,
  SG_ERR_OUT_OF_RANGE = 9,
  SG_ERR_INVALID_ARGUMENT = 10,
  SG_ERR_IO = 11,
  SG_ERR_INTERNAL = 100
} sg_status;

typedef struct sg_circuit sg_circuit;
typedef struct sg_profile sg_profile;
typedef struct sg_verdict sg_verdict;

SG_API const char *sg_version(void);
SG_API const char *sg_status_name(sg_status status);
/* Message of the last failed call on this thread; "" when none. */
SG_API const char *sg_last_error(void);
SG_API void sg_string_free(char *s);

/* Circuits */
SG_API sg_status sg_circuit_parse(const char *netlist, sg_circuit **out);
SG_API sg_status sg_circuit_format(const sg_circuit *c, char **out);
SG_API sg_status sg_circuit_info(const sg_circuit *c, uint32_t *num_inputs,
                                 uint64_t *num_gates);
SG_API void sg_circuit_free(sg_circuit *c);

/* Model count of c with some inputs fixed. fixed[j] is 0, 1, or -1 (free);
 * fixed may be NULL when fixed_len is 0. The count is returned in decimal. */
SG_API sg_status sg_count(const sg_circuit *c, const int8_t *fixed,
                          size_t fixed_len, uint32_t budget, char **count);

/* Gap amplification. t = 0 selects ceil(4 log2 g). provenance may be NULL. */
SG_API sg_status sg_amplify(const sg_circuit *c, uint32_t g, uint32_t psi,
                            uint32_t t, double max_lambda, uint64_t seed,
                            sg_circuit **out, char **provenance);

/* Linear code over n message bits with rate constant c, in text form. */
SG_API sg_status sg_code_build(uint32_t n, uint64_t seed, uint32_t c,
                               char **code_text);

/* Circuit to grouped CNF (DIMACS with group comments), repeated k times in
 * all-tuples mode. */
SG_API sg_status sg_reduce(const sg_circuit *c, uint32_t code_c,
                           uint64_t code_seed, uint32_t repeat_k,
                           char **dimacs);

/* Grouped DIMACS to the gis text format. */
SG_API sg_status sg_fglss(const char *dimacs, char **gis);

/* Pipeline profiles; keys follow the witness-file plan echo. */
SG_API sg_profile *sg_profile_new(void);
SG_API sg_status sg_profile_set(sg_profile *p, const char *key,
                                const char *value);
SG_API void sg_profile_free(sg_profile *p);

/* Honest-prover end-to-end run. p may be NULL for the default profile. */
SG_API sg_status sg_e2e(const sg_circuit *d_prime, const sg_profile *p,
                        sg_verdict **out);
/* As sg_e2e, also returning the witness file. */
SG_API sg_status sg_prove(const sg_circuit *d_prime, const sg_profile *p,
                          char **witness, sg_verdict **out);
/* Checks a witness file produced by sg_prove or by another prover. */
SG_API sg_status sg_verify(const sg_circuit *d_prime, const char *witness,
                           sg_verdict **out);

/* 1 for UNSAT-VERIFIED, 0 for REJECT. */
SG_API int sg_verdict_accepted(const sg_verdict *v);
SG_API sg_status sg_verdict_json(const sg_verdict *v, char **json);
SG_API void sg_verdict_free(sg_verdict *v);

/* Runs the bundled invariant suite; *passed is 1 when every check passed. */
SG_API sg_status sg_selftest(uint64_t seed, int *passed, char **report);

#ifdef __cplusplus
}
#endif

#endif /* SHARPGAP_H */
