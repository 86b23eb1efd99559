#ifndef MUFKIT_H
#define MUFKIT_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible function.
 */
typedef enum {
  MUF_STATUS_OK = 0,
  MUF_STATUS_NULL_POINTER = 1,
  MUF_STATUS_INVALID_DIMENSION = 2,
  MUF_STATUS_DIMENSION_MISMATCH = 3,
  MUF_STATUS_NOT_UNIT = 4,
  MUF_STATUS_NOT_A_FRAME = 5,
  MUF_STATUS_UNSUPPORTED_DIMENSION = 6,
  MUF_STATUS_INDEX_OUT_OF_RANGE = 7,
  MUF_STATUS_INVALID_INPUT = 8,
  MUF_STATUS_INFEASIBLE = 9,
  MUF_STATUS_CONSTRUCTION_FAILURE = 10,
  MUF_STATUS_PANIC = 11,
} MufStatus;

/**
 * Opaque ordered list of frames.
 */
typedef struct MufFrames MufFrames;

/**
 * Opaque square complex matrix.
 */
typedef struct MufMatrix MufMatrix;

/**
 * Opaque complex vector.
 */
typedef struct MufVector MufVector;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the most recent failure on this thread. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *mufkit_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *mufkit_version(void);

/**
 * Builds a vector from `dim` real and imaginary parts. `im` may be null.
 *
 * # Safety
 * `re` (and `im` when non-null) must point to `dim` readable doubles.
 */
MufStatus mufkit_vector_new(const double *re, const double *im, size_t dim, MufVector **out);

/**
 * # Safety
 * `v` must be a live handle or null.
 */
size_t mufkit_vector_dim(const MufVector *v);

/**
 * # Safety
 * `v` must be a live handle; `re` and `im` must be writable or null.
 */
MufStatus mufkit_vector_get(const MufVector *v, size_t index, double *re, double *im);

/**
 * # Safety
 * `v` must be a handle from this library or null; it is invalid afterwards.
 */
void mufkit_vector_free(MufVector *v);

/**
 * # Safety
 * `m` must be a live handle or null.
 */
size_t mufkit_matrix_dim(const MufMatrix *m);

/**
 * # Safety
 * `m` must be a live handle; `re` and `im` must be writable or null.
 */
MufStatus mufkit_matrix_get(const MufMatrix *m, size_t row, size_t col, double *re, double *im);

/**
 * # Safety
 * `m` must be a handle from this library or null; it is invalid afterwards.
 */
void mufkit_matrix_free(MufMatrix *m);

/**
 * Unitary DFT matrix `F_{jk} = ω^{jk}/√d`.
 *
 * # Safety
 * `out` must be writable.
 */
MufStatus mufkit_dft_matrix(size_t dim, MufMatrix **out);

/**
 * Zauner operator of dimension `dim`.
 *
 * # Safety
 * `out` must be writable.
 */
MufStatus mufkit_zauner_operator(size_t dim, MufMatrix **out);

/**
 * Unitary `U` with `U (X Z^k) U† = τ^{-k} Z` for prime `dim`. An `eps` of 0
 * selects the default tolerance.
 *
 * # Safety
 * `out` must be writable.
 */
MufStatus mufkit_clifford_conjugator(size_t dim, size_t k, double eps, MufMatrix **out);

/**
 * The analytic qubit fiducial.
 *
 * # Safety
 * `out` must be writable.
 */
MufStatus mufkit_qubit_fiducial(MufVector **out);

/**
 * Real fiducial of the one-parameter family in dimension 3.
 *
 * # Safety
 * `out` must be writable.
 */
MufStatus mufkit_d3_real_fiducial(double r0, MufVector **out);

/**
 * Largest deviation of `|⟨φ|X^j Z^k|φ⟩|²` from `1/(d+1)` and whether it is
 * within `eps` (0 for the default).
 *
 * # Safety
 * `v` must be a live handle; output pointers must be writable or null.
 */
MufStatus mufkit_is_fiducial(const MufVector *v,
                             double eps,
                             double *max_overlap_error,
                             bool *is_fiducial_out);

/**
 * Seeded multi-start search for a fiducial in dimension `dim`.
 *
 * # Safety
 * `out` must be writable; `residual` must be writable or null.
 */
MufStatus mufkit_search_fiducial(size_t dim,
                                 uint64_t seed,
                                 size_t restarts,
                                 double eps,
                                 MufVector **out,
                                 double *residual);

/**
 * The `d + 1` mutually unbiased bases for prime `dim`.
 *
 * # Safety
 * `out` must be writable.
 */
MufStatus mufkit_mub_prime(size_t dim, MufFrames **out);

/**
 * # Safety
 * `f` must be a live handle or null.
 */
size_t mufkit_frames_count(const MufFrames *f);

/**
 * Number of vectors in frame `index`, or 0 when out of range.
 *
 * # Safety
 * `f` must be a live handle or null.
 */
size_t mufkit_frames_size(const MufFrames *f, size_t index);

/**
 * Copies vector `vector` of frame `frame` into a new vector handle.
 *
 * # Safety
 * `f` must be a live handle; `out` must be writable.
 */
MufStatus mufkit_frames_vector(const MufFrames *f, size_t frame, size_t vector, MufVector **out);

/**
 * # Safety
 * `f` must be a handle from this library or null; it is invalid afterwards.
 */
void mufkit_frames_free(MufFrames *f);

/**
 * Certifies the frames as mutually unbiased; reports the common overlap and
 * the largest deviation from it.
 *
 * # Safety
 * `f` must be a live handle; output pointers must be writable or null.
 */
MufStatus mufkit_certify_frames(const MufFrames *f,
                                double eps,
                                double *overlap,
                                double *max_deviation,
                                bool *certified);

/**
 * Sum of quadratic Rényi entropies of `v` over `d + 1` bases, with the
 * lower bound `(d+1) log2((d+1)/2)` and whether the bound is attained.
 *
 * # Safety
 * Handles must be live; output pointers must be writable or null.
 */
MufStatus mufkit_entropy_certificate(const MufVector *v,
                                     const MufFrames *bases,
                                     double eps,
                                     double *entropy_sum,
                                     double *bound,
                                     bool *saturated);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MUFKIT_H */
