/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef ABSAF_H
#define ABSAF_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum AbsafStatus {
  ABSAF_STATUS_OK = 0,
  ABSAF_STATUS_NULL_POINTER = 1,
  ABSAF_STATUS_INVALID_UTF8 = 2,
  ABSAF_STATUS_PARSE = 3,
  ABSAF_STATUS_INVALID_INPUT = 4,
  ABSAF_STATUS_RESOURCE_LIMIT = 5,
  ABSAF_STATUS_TIMEOUT = 6,
  ABSAF_STATUS_NOT_REPRESENTABLE = 7,
  ABSAF_STATUS_BUFFER_TOO_SMALL = 8,
  ABSAF_STATUS_INTERNAL = 9,
} AbsafStatus;

/**
 * Opaque election: an AF, its ballots and its preferred extensions.
 */
typedef struct AbsafElection AbsafElection;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next call into the library on this thread.
 */
const char *absaf_last_error(void);

/**
 * Library version as a static string.
 */
const char *absaf_version(void);

/**
 * Parse an AF (`"apx"` or `"tgf"`) and its ballots (`"json"` or `"text"`),
 * enumerate the preferred extensions and return a handle in `out_election`.
 *
 * # Safety
 * String arguments must be null or NUL-terminated; `out_election` must be
 * null or writable.
 */
enum AbsafStatus absaf_load(const char *af_text,
                            const char *af_format,
                            const char *ballots_text,
                            const char *ballots_format,
                            struct AbsafElection **out_election);

/**
 * Release a handle from [`absaf_load`]. Null is ignored.
 *
 * # Safety
 * `election` must be null or a live handle not freed before.
 */
void absaf_free(struct AbsafElection *election);

/**
 * Release a string returned by the library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a string from this library not freed before.
 */
void absaf_string_free(char *s);

/**
 * Number of voters, multiplicities expanded.
 *
 * # Safety
 * `election` must be a live handle and `out_n` writable.
 */
enum AbsafStatus absaf_num_voters(const struct AbsafElection *election, size_t *out_n);

/**
 * Number of preferred extensions.
 *
 * # Safety
 * `election` must be a live handle and `out_m` writable.
 */
enum AbsafStatus absaf_num_extensions(const struct AbsafElection *election, size_t *out_m);

/**
 * Labels of extension `index` joined by commas, in `out_labels`. Free with
 * [`absaf_string_free`].
 *
 * # Safety
 * `election` must be a live handle and `out_labels` writable.
 */
enum AbsafStatus absaf_extension_labels(const struct AbsafElection *election,
                                        size_t index,
                                        char **out_labels);

/**
 * Select at most `k` extensions with `rule` (`"utilitarian"`,
 * `"egalitarian"`, `"harmonic"`, `"maxcov"`, or `"owa:w1,w2,..."`),
 * `strategy` (`"exact"` or `"greedy"`) and `mode` (`"regular"` or
 * `"core"`). The chosen extension indices go to `out_indices`, which holds
 * `capacity` entries; their count goes to `out_len` even when the buffer is
 * too small. `max_combinations` of 0 and `timeout_seconds <= 0` mean the
 * defaults.
 *
 * # Safety
 * `election` must be a live handle, strings NUL-terminated, `out_indices`
 * valid for `capacity` writes, and `out_len`, `out_objective` writable or
 * null where noted.
 */
enum AbsafStatus absaf_select(const struct AbsafElection *election,
                              const char *rule,
                              const char *strategy,
                              const char *mode,
                              size_t k,
                              uint64_t max_combinations,
                              double timeout_seconds,
                              size_t *out_indices,
                              size_t capacity,
                              size_t *out_len,
                              double *out_objective);

/**
 * Decide whether at most `k` extensions represent every voter exactly 1
 * under `mode`. `out_representable` receives the answer; when it is true a
 * witness outcome goes to `out_indices` as in [`absaf_select`].
 *
 * # Safety
 * As for [`absaf_select`].
 */
enum AbsafStatus absaf_decide_representable(const struct AbsafElection *election,
                                            size_t k,
                                            const char *mode,
                                            uint64_t max_combinations,
                                            bool *out_representable,
                                            size_t *out_indices,
                                            size_t capacity,
                                            size_t *out_len);

/**
 * Check justified representation for the outcome made of the `len`
 * extensions in `indices`, judged against committee size `k`. On a
 * violation `out_extension` (if non-null) receives the extension whose
 * supporters are left out.
 *
 * # Safety
 * `indices` must be valid for `len` reads; `out_holds` writable;
 * `out_extension` writable or null.
 */
enum AbsafStatus absaf_check_jr(const struct AbsafElection *election,
                                const size_t *indices,
                                size_t len,
                                size_t k,
                                const char *mode,
                                bool *out_holds,
                                size_t *out_extension);

/**
 * Representation of `voter` (1-based) by extension `index` under `mode`.
 *
 * # Safety
 * `election` must be a live handle and `out_value` writable.
 */
enum AbsafStatus absaf_representation(const struct AbsafElection *election,
                                      size_t voter,
                                      size_t index,
                                      const char *mode,
                                      double *out_value);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ABSAF_H */
