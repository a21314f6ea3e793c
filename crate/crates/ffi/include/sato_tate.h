#ifndef SATO_TATE_H
#define SATO_TATE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every fallible entry point.
typedef enum StStatus {
  ST_STATUS_OK = 0,
  ST_STATUS_NULL_POINTER = 1,
  ST_STATUS_INVALID_ARGUMENT = 2,
  ST_STATUS_NOT_PRIME = 3,
  ST_STATUS_SINGULAR_CURVE = 4,
  ST_STATUS_IO = 5,
  ST_STATUS_CORRUPT_CACHE = 6,
  ST_STATUS_INVALID_HISTOGRAM = 7,
  ST_STATUS_DIVERGENT = 8,
  ST_STATUS_PANIC = 9,
} StStatus;

// Opaque trace histogram for one prime.
typedef struct StHistogram StHistogram;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Static description of a status code. Never NULL; do not free.
const char *st_status_message(enum StStatus status);

// Message for the most recent failure on this thread, or NULL. The pointer
// stays valid until the next failing call on the same thread; do not free.
const char *st_last_error(void);

// Releases a string returned by this library. NULL is ignored.
//
// # Safety
// `s` must come from this library and not have been freed already.
void st_string_free(char *s);

// Scans every curve `y^2 = x^3 + a x + b` over `F_p`. With `orbits` set, one
// curve per twist orbit is scanned instead.
//
// # Safety
// `out` must be valid for writing a pointer.
enum StStatus st_histogram_scan(uint64_t p, bool orbits, struct StHistogram **out);

// Loads the cached histogram for `p` from `dir`. When `compute` is set a
// missing or invalid cache is recomputed and written back.
//
// # Safety
// `dir` must be a NUL-terminated string; `out` must be valid for writing.
enum StStatus st_histogram_load(const char *dir,
                                uint64_t p,
                                bool compute,
                                struct StHistogram **out);

// Writes the histogram's cache file into `dir`.
//
// # Safety
// `h` must be a live handle and `dir` a NUL-terminated string.
enum StStatus st_histogram_save(const struct StHistogram *h, const char *dir);

// Releases a histogram handle. NULL is ignored.
//
// # Safety
// `h` must come from this library and not have been freed already.
void st_histogram_free(struct StHistogram *h);

// The prime, or 0 for a NULL handle.
//
// # Safety
// `h` must be NULL or a live handle.
uint64_t st_histogram_prime(const struct StHistogram *h);

// `V_p = p (p - 1)`, or 0 for a NULL handle.
//
// # Safety
// `h` must be NULL or a live handle.
uint64_t st_histogram_family_size(const struct StHistogram *h);

// Number of nonzero buckets, or 0 for a NULL handle.
//
// # Safety
// `h` must be NULL or a live handle.
size_t st_histogram_len(const struct StHistogram *h);

// The `index`-th bucket in ascending trace order.
//
// # Safety
// `h` must be a live handle; `trace` and `count` must be valid for writing.
enum StStatus st_histogram_bucket(const struct StHistogram *h,
                                  size_t index,
                                  int64_t *trace,
                                  uint64_t *count);

// `M_p(2R)`. `value` receives the nearest double; `exact`, when not NULL,
// receives a newly allocated `num/den` string.
//
// # Safety
// `h` must be a live handle; `value` must be valid for writing; `exact` must
// be NULL or valid for writing.
enum StStatus st_empirical_moment(const struct StHistogram *h,
                                  uint32_t r,
                                  double *value,
                                  char **exact);

// `sum_n cos(2 m theta_n)` computed exactly; see [`st_empirical_moment`] for
// the output conventions.
//
// # Safety
// As for [`st_empirical_moment`].
enum StStatus st_expsum_exact(const struct StHistogram *h, uint64_t m, double *value, char **exact);

// Sets `is_zero` when the moment expansion identity holds exactly at `m`.
//
// # Safety
// `h` must be a live handle; `is_zero` must be valid for writing.
enum StStatus st_moment_identity_holds(const struct StHistogram *h, uint64_t m, bool *is_zero);

// Sato-Tate discrepancy `|N_I - V_p mu(I)|` of `[lo, hi)`.
//
// # Safety
// `h` must be a live handle; `out` must be valid for writing.
enum StStatus st_discrepancy(const struct StHistogram *h, double lo, double hi, double *out);

// Erdős–Turán bound on the Sato-Tate discrepancy of `[lo, hi)` with cutoff `m_cutoff`.
//
// # Safety
// `h` must be a live handle; `out` must be valid for writing.
enum StStatus st_et_bound(const struct StHistogram *h,
                          double lo,
                          double hi,
                          uint64_t m_cutoff,
                          double *out);

// `max(1, floor((3 - c - epsilon) / 6 * ln V_p))`.
//
// # Safety
// `out` must be valid for writing.
enum StStatus st_optimal_m(uint64_t v_p, double c, double epsilon, uint64_t *out);

// The identity sum for `m` by direct summation, as a `num/den` string.
//
// # Safety
// `out` must be valid for writing.
enum StStatus st_s_m_direct(uint64_t m, char **out);

// The identity sum for `m` through Gauss's hypergeometric closed form.
//
// # Safety
// `out` must be valid for writing.
enum StStatus st_s_m_hyper(uint64_t m, char **out);

// The `r`-th Catalan number as a decimal string.
//
// # Safety
// `out` must be valid for writing.
enum StStatus st_catalan(uint64_t r, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SATO_TATE_H */
