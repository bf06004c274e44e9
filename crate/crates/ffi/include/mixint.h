#ifndef MIXINT_H
#define MIXINT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MixintStatus {
  MIXINT_STATUS_OK = 0,
  MIXINT_STATUS_NULL_POINTER = 1,
  MIXINT_STATUS_INVALID_UTF8 = 2,
  MIXINT_STATUS_INVALID_JSON = 3,
  MIXINT_STATUS_INVALID_INPUT = 4,
  MIXINT_STATUS_DIVERGENT = 5,
  MIXINT_STATUS_PANIC = 6,
} MixintStatus;

/**
 * Opaque layer cake.
 */
typedef struct MixintCake MixintCake;

/**
 * Opaque convex body.
 */
typedef struct MixintPolytope MixintPolytope;

/**
 * Opaque radial α-concave profile.
 */
typedef struct MixintProfile MixintProfile;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. Valid until the
 * next call into the library from the same thread.
 */
const char *mixint_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *mixint_version(void);

/**
 * Frees a string returned by a `*_to_json` call.
 *
 * # Safety
 * `s` must come from this library or be NULL.
 */
void mixint_string_free(char *s);

/**
 * # Safety
 * `json` must be a NUL-terminated string; `out_handle` a valid pointer.
 */
enum MixintStatus mixint_polytope_from_json(const char *json, struct MixintPolytope **out_handle);

/**
 * # Safety
 * `p` must come from `mixint_polytope_from_json` or be NULL.
 */
void mixint_polytope_free(struct MixintPolytope *p);

/**
 * # Safety
 * Handles and out-pointers must be valid.
 */
enum MixintStatus mixint_polytope_volume(const struct MixintPolytope *p, double *out_value);

/**
 * `V(K_1, …, K_n)` of `len` bodies.
 *
 * # Safety
 * `bodies` must point to `len` valid handles.
 */
enum MixintStatus mixint_mixed_volume(const struct MixintPolytope *const *bodies,
                                      size_t len,
                                      double *out_value);

/**
 * # Safety
 * `json` must be a NUL-terminated string; `out_handle` a valid pointer.
 */
enum MixintStatus mixint_cake_from_json(const char *json, struct MixintCake **out_handle);

/**
 * # Safety
 * `c` must come from this library or be NULL.
 */
void mixint_cake_free(struct MixintCake *c);

/**
 * # Safety
 * Handles and out-pointers must be valid.
 */
enum MixintStatus mixint_cake_integral(const struct MixintCake *c, double *out_value);

/**
 * `V(f_1, …, f_n)` of `len` cakes.
 *
 * # Safety
 * `cakes` must point to `len` valid handles.
 */
enum MixintStatus mixint_mixed_integral(const struct MixintCake *const *cakes,
                                        size_t len,
                                        double *out_value);

/**
 * `W_k(f)` against the polytopal ball with `ball_facets` facets (0 = default).
 *
 * # Safety
 * Handles and out-pointers must be valid.
 */
enum MixintStatus mixint_quermassintegral(const struct MixintCake *c,
                                          size_t k,
                                          size_t ball_facets,
                                          double *out_value);

/**
 * Symmetric decreasing rearrangement; the result is a new handle.
 *
 * # Safety
 * Handles and out-pointers must be valid.
 */
enum MixintStatus mixint_rearrange(const struct MixintCake *c,
                                   size_t ball_facets,
                                   struct MixintCake **out_handle);

/**
 * # Safety
 * Handles and out-pointers must be valid; free the string with `mixint_string_free`.
 */
enum MixintStatus mixint_cake_to_json(const struct MixintCake *c, char **out_json);

/**
 * # Safety
 * `json` must be a NUL-terminated string; `out_handle` a valid pointer.
 */
enum MixintStatus mixint_profile_from_json(const char *json, struct MixintProfile **out_handle);

/**
 * # Safety
 * `p` must come from this library or be NULL.
 */
void mixint_profile_free(struct MixintProfile *p);

/**
 * `f(r)` for a radial profile.
 *
 * # Safety
 * Handles and out-pointers must be valid.
 */
enum MixintStatus mixint_profile_eval(const struct MixintProfile *p, double r, double *out_value);

/**
 * α-sum of two profiles with the same α and dimension; the result is a new handle.
 *
 * # Safety
 * Handles and out-pointers must be valid.
 */
enum MixintStatus mixint_alpha_sum(const struct MixintProfile *a,
                                   const struct MixintProfile *b,
                                   struct MixintProfile **out_handle);

/**
 * # Safety
 * Handles and out-pointers must be valid; free the string with `mixint_string_free`.
 */
enum MixintStatus mixint_profile_to_json(const struct MixintProfile *p, char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MIXINT_H */
