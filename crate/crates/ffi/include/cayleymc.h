#ifndef CAYLEYMC_H
#define CAYLEYMC_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CmcStatus {
  CMC_STATUS_OK = 0,
  CMC_STATUS_NULL_POINTER = 1,
  CMC_STATUS_INVALID_UTF8 = 2,
  CMC_STATUS_PARSE = 3,
  CMC_STATUS_INVALID_PARAMETER = 4,
  CMC_STATUS_PRECONDITION = 5,
  CMC_STATUS_COMPUTATION = 6,
  CMC_STATUS_PANIC = 7,
} CmcStatus;

/**
 * Opaque monodromy tuple.
 */
typedef struct CmcTuple CmcTuple;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *cmc_last_error(void);

/**
 * # Safety
 * `t` must be null or a handle returned by this library, freed at most once.
 */
void cmc_tuple_free(struct CmcTuple *t);

/**
 * # Safety
 * `s` must be null or a string returned by this library, freed at most once.
 */
void cmc_string_free(char *s);

/**
 * Cayley tuple for rational parameters written like `"1/3"`.
 *
 * # Safety
 * `alpha` and `beta` must be nul-terminated strings; `out` must be writable.
 */
enum CmcStatus cmc_cayley_solution(const char *alpha, const char *beta, struct CmcTuple **out);

/**
 * Induced tuple of the character `(a, b)` of order dividing `m`.
 *
 * # Safety
 * `out` must be writable.
 */
enum CmcStatus cmc_pushforward(uint64_t m, int64_t a, int64_t b, struct CmcTuple **out);

/**
 * Middle convolution with the scalar `exp(2πi·k/n)`.
 *
 * # Safety
 * `t` must be a live handle; `out` must be writable.
 */
enum CmcStatus cmc_middle_convolve(const struct CmcTuple *t,
                                   int64_t k,
                                   uint64_t n,
                                   struct CmcTuple **out);

/**
 * Parses `{"M0": ..., "M1": ..., "Mlambda": ...}`.
 *
 * # Safety
 * `json` must be a nul-terminated string; `out` must be writable.
 */
enum CmcStatus cmc_tuple_from_json(const char *json, struct CmcTuple **out);

/**
 * # Safety
 * `t` must be a live handle; `out` must be writable. Free the result with
 * `cmc_string_free`.
 */
enum CmcStatus cmc_tuple_to_json(const struct CmcTuple *t, char **out);

/**
 * # Safety
 * `t` must be a live handle; `out` must be writable.
 */
enum CmcStatus cmc_tuple_rank(const struct CmcTuple *t, size_t *out);

/**
 * # Safety
 * `t` must be a live handle; `out` must be writable.
 */
enum CmcStatus cmc_star_check(const struct CmcTuple *t, bool *out);

/**
 * # Safety
 * `t` must be a live handle; `out` must be writable.
 */
enum CmcStatus cmc_is_irreducible(const struct CmcTuple *t, bool *out);

/**
 * # Safety
 * `t` must be a live handle; `degree` and `conductor` must be writable.
 */
enum CmcStatus cmc_trace_field(const struct CmcTuple *t, uint64_t *degree, uint64_t *conductor);

/**
 * Pure braid orbit size; `finite` is false when `bound` was exceeded.
 *
 * # Safety
 * `t` must be a live handle; `size` and `finite` must be writable.
 */
enum CmcStatus cmc_orbit_size(const struct CmcTuple *t, size_t bound, size_t *size, bool *finite);

/**
 * Samples points of `y² = x(x − 1)(x − λ)` over `𝔽_{q²}` and counts those
 * with `g_p(x(P)) = x([p]P)`.
 *
 * # Safety
 * `lambda` must be a nul-terminated rational like `"-1/3"`; `agreeing` and
 * `fixes_branch_points` must be writable.
 */
enum CmcStatus cmc_flow_check(const char *lambda,
                              uint32_t p,
                              uint64_t q,
                              size_t samples,
                              uint64_t seed,
                              size_t *agreeing,
                              bool *fixes_branch_points);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CAYLEYMC_H */
