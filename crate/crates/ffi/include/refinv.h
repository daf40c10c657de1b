#ifndef REFINV_H
#define REFINV_H

#pragma once

/* Generated by cbindgen from crates/ffi/src. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum RefinvStatus {
  REFINV_STATUS_OK = 0,
  REFINV_STATUS_NULL_POINTER = 1,
  REFINV_STATUS_INVALID_ARGUMENT = 2,
  REFINV_STATUS_DIMENSION_MISMATCH = 3,
  REFINV_STATUS_SINGULAR = 4,
  REFINV_STATUS_NUMERICAL = 5,
  REFINV_STATUS_UNSUPPORTED = 6,
  REFINV_STATUS_NOT_CLOSED = 7,
  REFINV_STATUS_BUFFER_TOO_SMALL = 8,
  REFINV_STATUS_PANIC = 9,
} RefinvStatus;

/**
 * Result of a closure search.
 */
typedef struct RefinvClosureReport RefinvClosureReport;

/**
 * Dense row-major real matrix.
 */
typedef struct RefinvMatrix RefinvMatrix;

/**
 * System `F u'(t) + G u'(-t) + A u(t) + B u(-t) = 0`.
 */
typedef struct RefinvSystem RefinvSystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *refinv_version(void);

/**
 * Copies the calling thread's last error message into `buf`.
 *
 * Returns the message size including the NUL, or 0 when there is no error.
 * The copy is truncated to `len - 1` bytes when `buf` is too small.
 *
 * # Safety
 * `buf` must be null or valid for `len` bytes.
 */
size_t refinv_last_error_message(char *buf, size_t len);

/**
 * Creates a `rows x cols` matrix from `rows * cols` row-major values.
 *
 * # Safety
 * `data` must be valid for `rows * cols` reads; `out` must be writable.
 */
enum RefinvStatus refinv_matrix_new(size_t rows,
                                    size_t cols,
                                    const double *data,
                                    struct RefinvMatrix **out);

/**
 * Releases a matrix. Null is ignored.
 *
 * # Safety
 * `m` must come from this library and not be used afterwards.
 */
void refinv_matrix_free(struct RefinvMatrix *m);

/**
 * Writes the dimensions of `m`.
 *
 * # Safety
 * `m` must be a live matrix handle; `rows` and `cols` must be writable.
 */
enum RefinvStatus refinv_matrix_dims(const struct RefinvMatrix *m, size_t *rows, size_t *cols);

/**
 * Copies the row-major entries of `m` into `buf` of `len` values.
 *
 * # Safety
 * `m` must be a live matrix handle; `buf` must be valid for `len` writes.
 */
enum RefinvStatus refinv_matrix_copy_data(const struct RefinvMatrix *m, double *buf, size_t len);

/**
 * Creates a reflection system from its four `n x n` coefficients. The
 * matrices are copied; `F - G` and `F + G` must be invertible.
 *
 * # Safety
 * All matrix arguments must be live handles; `out` must be writable.
 */
enum RefinvStatus refinv_system_new(const struct RefinvMatrix *f,
                                    const struct RefinvMatrix *g,
                                    const struct RefinvMatrix *a,
                                    const struct RefinvMatrix *b,
                                    struct RefinvSystem **out);

/**
 * Releases a system. Null is ignored.
 *
 * # Safety
 * `sys` must come from this library and not be used afterwards.
 */
void refinv_system_free(struct RefinvSystem *sys);

/**
 * Writes the dimension `n` of `sys`.
 *
 * # Safety
 * `sys` must be a live handle; `n` must be writable.
 */
enum RefinvStatus refinv_system_dim(const struct RefinvSystem *sys, size_t *n);

/**
 * `E = (F - G)^-1 (A - B) (F + G)^-1 (A + B)` as a new matrix.
 *
 * # Safety
 * `sys` must be a live handle; `out` must be writable.
 */
enum RefinvStatus refinv_system_e(const struct RefinvSystem *sys, struct RefinvMatrix **out);

/**
 * `M+ = (F + G)^-1 (A + B)` as a new matrix.
 *
 * # Safety
 * `sys` must be a live handle; `out` must be writable.
 */
enum RefinvStatus refinv_system_m_plus(const struct RefinvSystem *sys, struct RefinvMatrix **out);

/**
 * Fundamental matrix `X(t)` with `X(0) = I`.
 *
 * # Safety
 * `sys` must be a live handle; `out` must be writable.
 */
enum RefinvStatus refinv_fundamental_matrix(const struct RefinvSystem *sys,
                                            double t,
                                            struct RefinvMatrix **out);

/**
 * Derivative `X'(t)` of the fundamental matrix.
 *
 * # Safety
 * `sys` must be a live handle; `out` must be writable.
 */
enum RefinvStatus refinv_fundamental_derivative(const struct RefinvSystem *sys,
                                                double t,
                                                struct RefinvMatrix **out);

/**
 * `Y(t) = X(t)^-1 X'(t)`, which solves `Y' = E - Y^2`.
 *
 * # Safety
 * `sys` must be a live handle; `out` must be writable.
 */
enum RefinvStatus refinv_riccati_y(const struct RefinvSystem *sys,
                                   double t,
                                   struct RefinvMatrix **out);

/**
 * Crossed invariant `Z_{m_1..m_N}(X_1..X_N)`: the coefficient of
 * `a_1^m_1 .. a_N^m_N` in `det(I + sum a_i X_i)`.
 *
 * # Safety
 * `ms` and `xs` must be valid for `count` reads and every `xs[i]` a live
 * matrix handle; `out` must be writable.
 */
enum RefinvStatus refinv_z_value(const int64_t *ms,
                                 const struct RefinvMatrix *const *xs,
                                 size_t count,
                                 double *out);

/**
 * Closure search over second derivatives of determinant invariants of an
 * `n x n` fundamental matrix, up to `max_depth` rounds.
 *
 * # Safety
 * `out` must be writable.
 */
enum RefinvStatus refinv_closure_explore(size_t n,
                                         size_t max_depth,
                                         struct RefinvClosureReport **out);

/**
 * Releases a closure report. Null is ignored.
 *
 * # Safety
 * `report` must come from this library and not be used afterwards.
 */
void refinv_closure_free(struct RefinvClosureReport *report);

/**
 * Writes whether the search closed and how many states it holds.
 *
 * # Safety
 * `report` must be a live handle; `closed` and `states` must be writable.
 */
enum RefinvStatus refinv_closure_summary(const struct RefinvClosureReport *report,
                                         bool *closed,
                                         size_t *states);

/**
 * Copies the report as JSON into `buf`. `needed` (optional) receives the
 * size including the NUL; a short buffer gives `BUFFER_TOO_SMALL`.
 *
 * # Safety
 * `report` must be a live handle; `buf` must be null or valid for `len`
 * bytes; `needed` must be null or writable.
 */
enum RefinvStatus refinv_closure_to_json(const struct RefinvClosureReport *report,
                                         char *buf,
                                         size_t len,
                                         size_t *needed);

/**
 * Largest deviation of the closed transition system from second
 * differences of the states along `sys`, over `count` times.
 *
 * # Safety
 * `report` and `sys` must be live handles; `ts` valid for `count` reads;
 * `out` writable.
 */
enum RefinvStatus refinv_closure_verify(const struct RefinvClosureReport *report,
                                        const struct RefinvSystem *sys,
                                        const double *ts,
                                        size_t count,
                                        double h,
                                        double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* REFINV_H */
