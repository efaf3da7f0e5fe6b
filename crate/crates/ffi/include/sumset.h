#ifndef SUMSET_H
#define SUMSET_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes. The nonzero input/budget/internal values match the CLI exit codes.
 */
typedef enum SumsetStatus {
  SUMSET_STATUS_OK = 0,
  SUMSET_STATUS_NULL_POINTER = 1,
  SUMSET_STATUS_INVALID_INPUT = 2,
  SUMSET_STATUS_BUDGET_EXCEEDED = 3,
  SUMSET_STATUS_INTERNAL_VIOLATION = 4,
  /**
   * The caller's buffer is too small; the required length was written.
   */
  SUMSET_STATUS_BUFFER_TOO_SMALL = 5,
  SUMSET_STATUS_PANIC = 6,
} SumsetStatus;

/**
 * Opaque search report.
 */
typedef struct SumsetSearch SumsetSearch;

/**
 * Opaque integer set.
 */
typedef struct SumsetSet SumsetSet;

/**
 * Opaque counting-chain verification report.
 */
typedef struct SumsetVerification SumsetVerification;

/**
 * Exact ratio verdict; mirrors `RatioVerdict` without the set.
 */
typedef struct SumsetRatioVerdict {
  size_t n;
  size_t k;
  uint64_t size_k;
  uint64_t size_k1;
  /**
   * (k+1)·|(k+1)∧A|
   */
  uint64_t lhs_cross;
  /**
   * (n−k)·|k∧A|
   */
  uint64_t rhs_cross;
  bool holds;
  bool equality;
  bool hyp_theorem;
  bool hyp_question;
} SumsetRatioVerdict;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. The pointer stays
 * valid until the next library call on the same thread.
 */
const char *sumset_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *sumset_version(void);

/**
 * Builds a set from `len` integers in any order. Duplicates are rejected.
 */
enum SumsetStatus sumset_set_new(const int64_t *elements, size_t len, struct SumsetSet **out);

/**
 * Parses the comma-separated textual form, e.g. `"1,2,4,8"`.
 */
enum SumsetStatus sumset_set_parse(const char *text, struct SumsetSet **out);

/**
 * Runs a generator spec such as `"gp:n=5,r=2,a0=1"`; `seed` is used when a
 * random spec carries none.
 */
enum SumsetStatus sumset_set_generate(const char *spec, uint64_t seed, struct SumsetSet **out);

void sumset_set_free(struct SumsetSet *set);

/**
 * Cardinality, or 0 for NULL.
 */
size_t sumset_set_len(const struct SumsetSet *set);

/**
 * Sorted elements into `buf`; `*out_len` receives the element count.
 */
enum SumsetStatus sumset_set_elements(const struct SumsetSet *set,
                                      int64_t *buf,
                                      size_t cap,
                                      size_t *out_len);

/**
 * `|k∧A|`.
 */
enum SumsetStatus sumset_ksum_count(const struct SumsetSet *set, size_t k, uint64_t *out);

/**
 * The sorted values of `k∧A`. Call with `cap = 0` to learn the length.
 */
enum SumsetStatus sumset_ksum_values(const struct SumsetSet *set,
                                     size_t k,
                                     int64_t *buf,
                                     size_t cap,
                                     size_t *out_len);

/**
 * Capped multiplicities of `k`-sums, over `A ∖ {exclude}` when
 * `has_exclude` is set. Sums go to `sums`, counts to `counts`, both of
 * capacity `cap_len`.
 */
enum SumsetStatus sumset_ksum_multiplicity(const struct SumsetSet *set,
                                           size_t k,
                                           uint32_t cap,
                                           bool has_exclude,
                                           int64_t exclude,
                                           int64_t *sums,
                                           uint32_t *counts,
                                           size_t cap_len,
                                           size_t *out_len);

enum SumsetStatus sumset_ratio_check(const struct SumsetSet *set,
                                     size_t k,
                                     struct SumsetRatioVerdict *out);

/**
 * Builds the extension graphs and checks the counting chain. A report whose
 * inequalities fail is still returned with `SUMSET_STATUS_OK`.
 */
enum SumsetStatus sumset_verify_chain(const struct SumsetSet *set,
                                      size_t k,
                                      struct SumsetVerification **out);

/**
 * True iff every counting-chain inequality holds.
 */
bool sumset_verification_chain_holds(const struct SumsetVerification *v);

/**
 * True iff `(k+1)|(k+1)∧A| ≤ (n−k)|k∧A|` for the verified instance.
 */
bool sumset_verification_conclusion_holds(const struct SumsetVerification *v);

enum SumsetStatus sumset_verification_edge_counts(const struct SumsetVerification *v,
                                                  uint64_t *e_g,
                                                  uint64_t *e_h);

/**
 * JSON serialization; release with [`sumset_string_free`].
 */
char *sumset_verification_to_json(const struct SumsetVerification *v);

void sumset_verification_free(struct SumsetVerification *v);

/**
 * Every `n`-subset of `{1..universe}`; fails with
 * `SUMSET_STATUS_BUDGET_EXCEEDED` when `C(universe, n) > budget`.
 */
enum SumsetStatus sumset_exhaustive_search(uint64_t universe,
                                           size_t n,
                                           size_t k,
                                           uint64_t budget,
                                           bool canonical,
                                           struct SumsetSearch **out);

/**
 * Seeded hill climbing over `n`-sets in `[lo, hi]` with `budget` evaluations.
 */
enum SumsetStatus sumset_stochastic_search(size_t n,
                                           size_t k,
                                           int64_t lo,
                                           int64_t hi,
                                           uint64_t seed,
                                           uint64_t budget,
                                           struct SumsetSearch **out);

uint64_t sumset_search_instances_checked(const struct SumsetSearch *s);

size_t sumset_search_counterexample_count(const struct SumsetSearch *s);

/**
 * Verdict and elements of the best set found.
 */
enum SumsetStatus sumset_search_best(const struct SumsetSearch *s,
                                     struct SumsetRatioVerdict *verdict,
                                     int64_t *elements,
                                     size_t cap,
                                     size_t *out_len);

/**
 * JSON serialization; release with [`sumset_string_free`].
 */
char *sumset_search_to_json(const struct SumsetSearch *s);

void sumset_search_free(struct SumsetSearch *s);

/**
 * Releases strings returned by the `*_to_json` functions.
 */
void sumset_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SUMSET_H */
