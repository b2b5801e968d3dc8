#ifndef EDIST_H
#define EDIST_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum EdistStatus {
  EDIST_STATUS_OK = 0,
  EDIST_STATUS_NULL_POINTER = 1,
  EDIST_STATUS_INVALID_PARAM = 2,
  EDIST_STATUS_DIMENSION = 3,
  EDIST_STATUS_SYMBOL_OUT_OF_RANGE = 4,
  EDIST_STATUS_TOO_LARGE = 5,
  EDIST_STATUS_ACCESS_VIOLATION = 6,
  EDIST_STATUS_TREE_MISMATCH = 7,
  EDIST_STATUS_PARSE = 8,
  EDIST_STATUS_IO = 9,
  EDIST_STATUS_PANIC = 10,
} EdistStatus;

/**
 * Exact metric selector for [`edist_exact`].
 */
typedef enum EdistMetric {
  EDIST_METRIC_ED = 0,
  EDIST_METRIC_EDD = 1,
  EDIST_METRIC_LCS = 2,
} EdistMetric;

/**
 * Tuning constant presets.
 */
typedef enum EdistPreset {
  EDIST_PRESET_DESK = 0,
  EDIST_PRESET_LEAN = 1,
  EDIST_PRESET_UNIT = 2,
} EdistPreset;

/**
 * Opaque string of symbols.
 */
typedef struct EdistText EdistText;

/**
 * Opaque sample tree.
 */
typedef struct EdistTree EdistTree;

/**
 * Outcome of one estimation. `decision` is -1 when no decision was taken,
 * 0 for close and 1 for far.
 */
typedef struct EdistReport {
  double estimate;
  uint64_t queries;
  int32_t decision;
  double millis;
} EdistReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread (empty if none). The
 * pointer stays valid until the next failing call on the same thread.
 */
const char *edist_last_error(void);

/**
 * Copies `len` symbols, each below `alphabet_size`, into a new text.
 *
 * # Safety
 * `symbols` must point to `len` readable values (it may be null when `len`
 * is 0) and `out` must be writable.
 */
enum EdistStatus edist_text_new(const uint32_t *symbols,
                                size_t len,
                                uint32_t alphabet_size,
                                struct EdistText **out);

/**
 * # Safety
 * `text` must come from [`edist_text_new`] and not be used afterwards.
 */
void edist_text_free(struct EdistText *text);

/**
 * # Safety
 * `text` must be a live handle; `out` writable.
 */
enum EdistStatus edist_text_len(const struct EdistText *text, size_t *out);

/**
 * Exact edit distance, indel distance or LCS length.
 *
 * # Safety
 * `x`, `y` must be live handles; `out` writable.
 */
enum EdistStatus edist_exact(const struct EdistText *x,
                             const struct EdistText *y,
                             enum EdistMetric metric,
                             uint64_t *out);

/**
 * Exact E-distance after padding both texts to a common power of `b`.
 *
 * # Safety
 * `x`, `y` must be live handles; `out` writable.
 */
enum EdistStatus edist_e_distance(const struct EdistText *x,
                                  const struct EdistText *y,
                                  size_t b,
                                  uint64_t *out);

/**
 * Samples a tree for length `n` (a power of `b`).
 *
 * # Safety
 * `out` must be writable.
 */
enum EdistStatus edist_tree_build(size_t n,
                                  size_t b,
                                  double beta,
                                  uint64_t seed,
                                  enum EdistPreset preset,
                                  struct EdistTree **out);

/**
 * # Safety
 * `tree` must come from [`edist_tree_build`] and not be used afterwards.
 */
void edist_tree_free(struct EdistTree *tree);

/**
 * Number of distinct positions of `x` the tree will read.
 *
 * # Safety
 * `tree` must be a live handle; `out` writable.
 */
enum EdistStatus edist_tree_query_count(const struct EdistTree *tree, uint64_t *out);

/**
 * Estimates the E-distance over a prebuilt tree and applies the far/close
 * threshold `2n/β`. Both texts must have the tree's length.
 *
 * # Safety
 * All handles live; `out` writable.
 */
enum EdistStatus edist_estimate(const struct EdistText *x,
                                const struct EdistText *y,
                                const struct EdistTree *tree,
                                struct EdistReport *out);

/**
 * Pads, samples a fresh tree and decides `ed > n/β` versus small.
 *
 * # Safety
 * `x`, `y` must be live handles; `out` writable.
 */
enum EdistStatus edist_dtep(const struct EdistText *x,
                            const struct EdistText *y,
                            size_t b,
                            double beta,
                            uint64_t seed,
                            enum EdistPreset preset,
                            struct EdistReport *out);

/**
 * Approximates ed by scanning β = n, n/2, …; `estimate` is `n/β` of the last
 * far decision (0 if none) and `queries` the total over all runs.
 *
 * # Safety
 * `x`, `y` must be live handles; `estimate` and `queries` writable.
 */
enum EdistStatus edist_approximate(const struct EdistText *x,
                                   const struct EdistText *y,
                                   size_t b,
                                   uint64_t seed,
                                   enum EdistPreset preset,
                                   double *estimate,
                                   uint64_t *queries);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EDIST_H */
