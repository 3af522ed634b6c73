#ifndef METRIC_SPREAD_H
#define METRIC_SPREAD_H

/* Generated with cbindgen:0.29.4 */

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MsStatus {
  MS_STATUS_OK = 0,
  MS_STATUS_NULL_POINTER = 1,
  MS_STATUS_INVALID_INPUT = 2,
  MS_STATUS_NO_WEIGHTING = 3,
  MS_STATUS_UNSUPPORTED = 4,
  MS_STATUS_PANIC = 5,
} MsStatus;

typedef enum MsQuantity {
  MS_QUANTITY_SPREAD = 0,
  MS_QUANTITY_MAGNITUDE = 1,
  MS_QUANTITY_MAXIMUM_DIVERSITY = 2,
  MS_QUANTITY_DIMENSION = 3,
} MsQuantity;

/**
 * Opaque handle to a finite metric space.
 */
typedef struct MsSpace MsSpace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The string is
 * owned by the library and valid until the next failing call on the thread.
 */
const char *ms_last_error_message(void);

/**
 * Builds a space from a row-major `n x n` distance matrix.
 *
 * # Safety
 * `distances` must point to `n * n` readable doubles; `out` must be writable.
 */
enum MsStatus ms_space_from_matrix(const double *distances, size_t n, struct MsSpace **out);

/**
 * Builds a Euclidean point cloud from `n` row-major points of dimension `dim`.
 *
 * # Safety
 * `coords` must point to `n * dim` readable doubles; `out` must be writable.
 */
enum MsStatus ms_space_from_points(const double *coords,
                                   size_t n,
                                   size_t dim,
                                   struct MsSpace **out);

/**
 * Builds a space from a JSON descriptor such as
 * `{"generator":"cantor","params":{"depth":10}}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum MsStatus ms_space_from_descriptor(const char *json, struct MsSpace **out);

/**
 * Releases a space. Null is ignored.
 *
 * # Safety
 * `space` must come from an `ms_space_from_*` constructor and not be freed
 * twice.
 */
void ms_space_free(struct MsSpace *space);

/**
 * # Safety
 * `space` must be a live handle; `out` must be writable.
 */
enum MsStatus ms_space_len(const struct MsSpace *space, size_t *out);

/**
 * `E_q(tX)`; pass `INFINITY` for `q = inf`.
 *
 * # Safety
 * `space` must be a live handle; `out` must be writable.
 */
enum MsStatus ms_spread(const struct MsSpace *space, double t, double q, double *out);

/**
 * `|tX|`; returns `MS_STATUS_NO_WEIGHTING` when the similarity matrix is
 * singular.
 *
 * # Safety
 * `space` must be a live handle; `out` must be writable.
 */
enum MsStatus ms_magnitude(const struct MsSpace *space, double t, double *out);

/**
 * `|tX|_+` by exhaustive enumeration (at most 20 points).
 *
 * # Safety
 * `space` must be a live handle; `out` must be writable.
 */
enum MsStatus ms_maximum_diversity(const struct MsSpace *space, double t, double *out);

/**
 * Spread dimension at scale `t` with relative log-step `delta`.
 *
 * # Safety
 * `space` must be a live handle; `out` must be writable.
 */
enum MsStatus ms_spread_dimension(const struct MsSpace *space, double t, double delta, double *out);

/**
 * Evaluates `quantity` at each of the `len` strictly increasing `scales`,
 * writing `len` values to `values` (`NaN` where undefined). `q` is the
 * order for spread profiles and the log-step for dimension profiles.
 *
 * # Safety
 * `scales` must hold `len` readable doubles and `values` `len` writable ones.
 */
enum MsStatus ms_profile(const struct MsSpace *space,
                         enum MsQuantity quantity,
                         double q,
                         const double *scales,
                         size_t len,
                         double *values);

/**
 * `E_0` of the interval of length `l`.
 *
 * # Safety
 * `out` must be writable.
 */
enum MsStatus ms_interval_spread0(double l, double *out);

/**
 * `E_2` of the interval of length `l`.
 *
 * # Safety
 * `out` must be writable.
 */
enum MsStatus ms_interval_spread2(double l, double *out);

/**
 * `E_inf` of the interval of length `l`.
 *
 * # Safety
 * `out` must be writable.
 */
enum MsStatus ms_interval_spread_inf(double l, double *out);

/**
 * Magnitude `l/2 + 1` of the interval of length `l`.
 *
 * # Safety
 * `out` must be writable.
 */
enum MsStatus ms_interval_magnitude(double l, double *out);

/**
 * `E_0` of the round `n`-sphere of radius `r`.
 *
 * # Safety
 * `out` must be writable.
 */
enum MsStatus ms_sphere_spread0(size_t n, double r, double *out);

/**
 * Two-term large-scale expansion of `E_0(tX)` for a closed `n`-manifold.
 *
 * # Safety
 * `out` must be writable.
 */
enum MsStatus ms_riemannian_asymptotic_spread(size_t n,
                                              double volume,
                                              double total_scalar_curvature,
                                              double t,
                                              double *out);

/**
 * `area t^2 / (2 pi) + chi` for a closed surface.
 *
 * # Safety
 * `out` must be writable.
 */
enum MsStatus ms_surface_asymptotic_spread(double area,
                                           double euler_characteristic,
                                           double t,
                                           double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* METRIC_SPREAD_H */
