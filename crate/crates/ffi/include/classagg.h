#ifndef CLASSAGG_H
#define CLASSAGG_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every fallible call.
typedef enum ClassaggStatus {
  CLASSAGG_STATUS_OK = 0,
  // A check or verification ran and came out negative.
  CLASSAGG_STATUS_FAIL = 1,
  CLASSAGG_STATUS_BUDGET_EXCEEDED = 2,
  CLASSAGG_STATUS_INVALID_INPUT = 3,
  CLASSAGG_STATUS_NULL_POINTER = 4,
  CLASSAGG_STATUS_PANIC = 5,
} ClassaggStatus;

// An aggregation function loaded from a document or a named rule.
typedef struct ClassaggCaf ClassaggCaf;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static nul-terminated string.
const char *classagg_version(void);

// Message for the last failed call on this thread, or null. Valid until
// the next call into the library on the same thread.
const char *classagg_last_error_message(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void classagg_string_free(char *s);

// Parses a CAF document. Certified documents are checked within `budget`.
//
// # Safety
// `json` must be a nul-terminated string; `out` must be writable.
enum ClassaggStatus classagg_caf_from_json(const char *json,
                                           uint64_t budget,
                                           struct ClassaggCaf **out);

// Builds a named rule (`dictator:D`, `essential:D:PERM`, `plurality`,
// `majority:tie=P`, `plurality-table1`). Pass `n = m = rho = 0` for rules
// with fixed sizes.
//
// # Safety
// `rule` must be a nul-terminated string; `out` must be writable.
enum ClassaggStatus classagg_caf_from_rule(const char *rule,
                                           size_t n,
                                           size_t m,
                                           size_t rho,
                                           struct ClassaggCaf **out);

// Releases a handle. Null is ignored.
//
// # Safety
// `caf` must come from this library and not have been freed.
void classagg_caf_free(struct ClassaggCaf *caf);

// Writes the sizes of `caf`.
//
// # Safety
// `caf` must be a live handle; the out pointers must be writable.
enum ClassaggStatus classagg_caf_params(const struct ClassaggCaf *caf,
                                        size_t *n,
                                        size_t *m,
                                        size_t *rho);

// Aggregates a profile. `profile` holds `n * m` categories, individual by
// individual; `out` receives `m` categories.
//
// # Safety
// `profile` must point to `profile_len` bytes and `out` to `out_len`.
enum ClassaggStatus classagg_caf_evaluate(const struct ClassaggCaf *caf,
                                          const uint8_t *profile,
                                          size_t profile_len,
                                          uint8_t *out,
                                          size_t out_len);

// Checks one axiom by name. Returns `CLASSAGG_STATUS_OK` if it holds and
// `CLASSAGG_STATUS_FAIL` if it does not.
//
// # Safety
// `caf` must be a live handle; `axiom` a nul-terminated string.
enum ClassaggStatus classagg_caf_check_axiom(const struct ClassaggCaf *caf,
                                             const char *axiom,
                                             uint64_t budget);

// JSON array of axiom reports with witnesses. `axioms` is a
// comma-separated list, or null for all of them.
//
// # Safety
// `caf` must be a live handle; `axioms` null or a nul-terminated string;
// `out` writable.
enum ClassaggStatus classagg_caf_check_report_json(const struct ClassaggCaf *caf,
                                                   const char *axioms,
                                                   uint64_t budget,
                                                   char **out);

// Finds `(d, pi)` with `alpha(P) = pi . P_d`. On `CLASSAGG_STATUS_OK` writes the
// one-based individual and `rho` permutation images; `CLASSAGG_STATUS_FAIL` means
// there is none.
//
// # Safety
// `caf` must be a live handle; `individual` writable; `permutation` must
// point to `permutation_len` bytes.
enum ClassaggStatus classagg_caf_essential_dictator(const struct ClassaggCaf *caf,
                                                    uint64_t budget,
                                                    size_t *individual,
                                                    uint8_t *permutation,
                                                    size_t permutation_len);

// Pivotal-voter extraction report as JSON. Needs per-object tables.
//
// # Safety
// `caf` must be a live handle; `out` writable.
enum ClassaggStatus classagg_caf_extract_pivotal_json(const struct ClassaggCaf *caf,
                                                      uint64_t budget,
                                                      char **out);

// Verifies a claim (`thm1`, `coro1`, `coro2`, `prop1`, `thm2`) exhaustively
// and writes the verdict as JSON. `CLASSAGG_STATUS_FAIL` means it does not hold.
//
// # Safety
// `claim` must be a nul-terminated string; `out` writable.
enum ClassaggStatus classagg_verify_claim_json(const char *claim,
                                               size_t n,
                                               size_t m,
                                               size_t rho,
                                               uint64_t budget,
                                               bool prune,
                                               char **out);

// Number of classifications of `m` objects onto `rho` categories.
// `CLASSAGG_STATUS_INVALID_INPUT` if it does not fit in 64 bits.
//
// # Safety
// `out` must be writable.
enum ClassaggStatus classagg_count_classifications(size_t m, size_t rho, uint64_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CLASSAGG_H */
