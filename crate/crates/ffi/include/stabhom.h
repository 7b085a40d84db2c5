#ifndef STABHOM_H
#define STABHOM_H

#include <stddef.h>
#include <stdint.h>

typedef enum StabhomStatus {
  STABHOM_STATUS_OK = 0,
  STABHOM_STATUS_NULL_POINTER = 1,
  STABHOM_STATUS_INVALID_UTF8 = 2,
  STABHOM_STATUS_PARSE = 3,
  STABHOM_STATUS_INVALID_INPUT = 4,
  STABHOM_STATUS_NOT_COMPUTABLE = 5,
  STABHOM_STATUS_PRECONDITION = 6,
  STABHOM_STATUS_INTERNAL = 7,
  STABHOM_STATUS_PANIC = 8,
} StabhomStatus;

// How a stable homology value was obtained.
typedef enum StabhomStrategy {
  STABHOM_STRATEGY_VANISH_BY_PD = 0,
  STABHOM_STRATEGY_VANISH_BY_ID = 1,
  STABHOM_STRATEGY_TATE_RESOLUTION = 2,
  STABHOM_STRATEGY_OPPOSITE_BALANCE = 3,
} StabhomStrategy;

// Opaque algebra handle.
typedef struct StabhomAlgebra StabhomAlgebra;

// Opaque module handle; carries the algebra it is a module over.
typedef struct StabhomModule StabhomModule;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread; empty after a success.
// Valid until the next call on the same thread.
const char *stabhom_last_error(void);

// # Safety
// `source` must be a NUL-terminated string; `out` must be writable.
enum StabhomStatus stabhom_algebra_parse(const char *source, struct StabhomAlgebra **out);

// # Safety
// `a` must come from `stabhom_algebra_parse` or be null; it must not be used afterwards.
void stabhom_algebra_free(struct StabhomAlgebra *a);

// # Safety
// `a` must be a live handle; `out` must be writable.
enum StabhomStatus stabhom_algebra_dim(const struct StabhomAlgebra *a, uintptr_t *out);

// Parses a module over `a` (`right == 0`) or over its opposite (`right != 0`).
//
// # Safety
// `a` must be a live handle, `source` a NUL-terminated string, `out` writable.
enum StabhomStatus stabhom_module_parse(const struct StabhomAlgebra *a,
                                        const char *source,
                                        int32_t right,
                                        struct StabhomModule **out);

// # Safety
// `m` must come from `stabhom_module_parse` or `stabhom_module_dual`, or be null.
void stabhom_module_free(struct StabhomModule *m);

// # Safety
// `m` must be a live handle; `out` must be writable.
enum StabhomStatus stabhom_module_dim(const struct StabhomModule *m, uintptr_t *out);

// `D(m)`, a module over the opposite algebra.
//
// # Safety
// `m` must be a live handle; `out` must be writable.
enum StabhomStatus stabhom_module_dual(const struct StabhomModule *m, struct StabhomModule **out);

// `dim Tor_i(m, n)` with `m` over the opposite algebra and `n` over the algebra.
//
// # Safety
// Handles must be live; `out` must be writable.
enum StabhomStatus stabhom_tor(const struct StabhomModule *m,
                               const struct StabhomModule *n,
                               int64_t i,
                               uintptr_t *out);

// `dim Ext^i(m, n)` for `m` and `n` over the same algebra.
//
// # Safety
// Handles must be live; `out` must be writable.
enum StabhomStatus stabhom_ext(const struct StabhomModule *m,
                               const struct StabhomModule *n,
                               int64_t i,
                               uintptr_t *out);

// `dim Stor_i(m, n)`. Returns `NotComputable` when no certificate applies.
//
// # Safety
// Handles must be live; outputs must be writable.
enum StabhomStatus stabhom_stor(const struct StabhomModule *m,
                                const struct StabhomModule *n,
                                int64_t i,
                                uintptr_t *out_dim,
                                enum StabhomStrategy *out_strategy);

// Projective dimension searched up to `bound`: `*finite = 1` with the exact
// value, or `*finite = 0` with a lower bound.
//
// # Safety
// `m` must be a live handle; outputs must be writable.
enum StabhomStatus stabhom_pd(const struct StabhomModule *m,
                              uintptr_t bound,
                              uintptr_t *value,
                              int32_t *finite);

// Injective dimension, reported like `stabhom_pd`.
//
// # Safety
// `m` must be a live handle; outputs must be writable.
enum StabhomStatus stabhom_id(const struct StabhomModule *m,
                              uintptr_t bound,
                              uintptr_t *value,
                              int32_t *finite);

// G-dimension with default search bounds, reported like `stabhom_pd`.
//
// # Safety
// `m` must be a live handle; outputs must be writable.
enum StabhomStatus stabhom_gdim(const struct StabhomModule *m, uintptr_t *value, int32_t *finite);

// Runs one theorem tag (or `"all"`) over a corpus manifest on degrees `[lo, hi]`.
//
// # Safety
// Strings must be NUL-terminated; outputs must be writable.
enum StabhomStatus stabhom_verify(const char *manifest,
                                  const char *tag,
                                  int64_t lo,
                                  int64_t hi,
                                  uintptr_t *passed,
                                  uintptr_t *failed,
                                  uintptr_t *skipped);

// Library version as a static NUL-terminated string.
const char *stabhom_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* STABHOM_H */
