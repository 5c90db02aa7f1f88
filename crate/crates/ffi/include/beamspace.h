#ifndef BEAMSPACE_H
#define BEAMSPACE_H

/* Generated by cbindgen from the beamspace-ffi crate; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every fallible call.
typedef enum BsStatus {
  // Success.
  BS_STATUS_OK = 0,
  // A required pointer argument was null.
  BS_STATUS_NULL_ARGUMENT = 1,
  // Arguments failed validation (geometry, lengths, ranges, subset size).
  BS_STATUS_INVALID_ARGUMENT = 2,
  // The first or last weight is (near) zero, so the beam polynomial drops
  // degree and the root space is not defined.
  BS_STATUS_DEGENERATE_INPUT = 3,
  // An iterative solve failed: no feasible minimax design, ambiguous
  // dominant subspace, or eigeniteration stall.
  BS_STATUS_SOLVER_FAILURE = 4,
  // The request exceeds a hard cap (family enumeration width, polynomial
  // degree).
  BS_STATUS_TOO_LARGE = 5,
  // A file could not be parsed.
  BS_STATUS_PARSE_ERROR = 6,
  // A file could not be read or written.
  BS_STATUS_IO_ERROR = 7,
} BsStatus;

// Opaque beamforming weight vector handle.
typedef struct BsBeamVector BsBeamVector;

// Opaque pattern-equivalent family handle.
typedef struct BsFamily BsFamily;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copies the calling thread's last diagnostic into `buffer` (NUL
// terminated, truncated to `capacity` bytes) and returns the full message
// length in bytes, excluding the terminator. A null or empty buffer only
// queries the length.
//
// # Safety
// `buffer` must be null or valid for `capacity` writable bytes.
size_t bs_last_error_message(char *buffer, size_t capacity);

// Creates a beam vector for `elements` array elements at `spacing`
// wavelengths from split real/imaginary weight arrays.
//
// # Safety
// `re` and `im` must point to `elements` readable doubles; `out` must be a
// valid destination for the handle. Free with [`bs_beam_vector_free`].
enum BsStatus bs_beam_vector_new(size_t elements,
                                 double spacing,
                                 const double *re,
                                 const double *im,
                                 struct BsBeamVector **out);

// Releases a beam vector handle; null is a no-op.
//
// # Safety
// `vector` must be null or a handle returned by this library, not yet freed.
void bs_beam_vector_free(struct BsBeamVector *vector);

// Number of array elements, or 0 for a null handle.
//
// # Safety
// `vector` must be null or a valid handle.
size_t bs_beam_vector_elements(const struct BsBeamVector *vector);

// Element spacing in wavelengths, or 0 for a null handle.
//
// # Safety
// `vector` must be null or a valid handle.
double bs_beam_vector_spacing(const struct BsBeamVector *vector);

// Copies the complex weights into split `re`/`im` arrays of length
// [`bs_beam_vector_elements`].
//
// # Safety
// `vector` must be a valid handle; `re` and `im` must be writable for that
// many doubles.
enum BsStatus bs_beam_vector_weights(const struct BsBeamVector *vector, double *re, double *im);

// Reads a beam vector from a JSON file.
//
// # Safety
// `path` must be a NUL-terminated string; `out` a valid destination.
enum BsStatus bs_beam_vector_read(const char *path, struct BsBeamVector **out);

// Writes a beam vector to a JSON file.
//
// # Safety
// `path` must be a NUL-terminated string; `vector` a valid handle.
enum BsStatus bs_beam_vector_write(const char *path, const struct BsBeamVector *vector);

// Returns the canonical-phase form of a vector as a new handle.
//
// # Safety
// `vector` must be a valid handle; `out` a valid destination.
enum BsStatus bs_beam_vector_canonicalize(const struct BsBeamVector *vector,
                                          struct BsBeamVector **out);

// Copies the autocorrelation lags `r_0 .. r_{M-1}` into split arrays of
// length [`bs_beam_vector_elements`].
//
// # Safety
// `vector` must be a valid handle; `re` and `im` writable for M doubles.
enum BsStatus bs_autocorrelation(const struct BsBeamVector *vector, double *re, double *im);

// Evaluates the beampattern at `count` angles (degrees) into `powers`.
//
// # Safety
// `vector` must be a valid handle; `angles_deg` readable and `powers`
// writable for `count` doubles.
enum BsStatus bs_beampattern(const struct BsBeamVector *vector,
                             const double *angles_deg,
                             size_t count,
                             double *powers);

// Tests whether two vectors generate the same beampattern within a relative
// tolerance on autocorrelation lags.
//
// # Safety
// `a` and `b` must be valid handles; `same` a valid destination.
enum BsStatus bs_same_beampattern(const struct BsBeamVector *a,
                                  const struct BsBeamVector *b,
                                  double rel_tol,
                                  bool *same);

// Designs the dominant-subspace sector mother vector for a uniform linear
// array: `elements` at `spacing` wavelengths, sector
// `[sector_lo_deg, sector_hi_deg]`, squared norm `total_power`.
//
// # Safety
// `out` must be a valid destination for the handle.
enum BsStatus bs_spheroidal_design(size_t elements,
                                   double spacing,
                                   double sector_lo_deg,
                                   double sector_hi_deg,
                                   double total_power,
                                   struct BsBeamVector **out);

// Enumerates the pattern-equivalent family of `mother`. `sample = 0` sweeps
// all `2^(M-1)` flip masks; a positive `sample` draws that many masks
// seeded by `seed` (required beyond 24 elements).
//
// # Safety
// `mother` must be a valid handle; `out` a valid destination. Free with
// [`bs_family_free`].
enum BsStatus bs_enumerate(const struct BsBeamVector *mother,
                           size_t sample,
                           uint64_t seed,
                           struct BsFamily **out);

// Releases a family handle; null is a no-op.
//
// # Safety
// `family` must be null or a handle returned by this library, not yet freed.
void bs_family_free(struct BsFamily *family);

// Number of distinct members, or 0 for a null handle.
//
// # Safety
// `family` must be null or a valid handle.
size_t bs_family_count(const struct BsFamily *family);

// Returns the mother vector as a new handle.
//
// # Safety
// `family` must be a valid handle; `out` a valid destination.
enum BsStatus bs_family_mother(const struct BsFamily *family, struct BsBeamVector **out);

// Returns member `index` as a new handle.
//
// # Safety
// `family` must be a valid handle; `out` a valid destination.
enum BsStatus bs_family_member(const struct BsFamily *family,
                               size_t index,
                               struct BsBeamVector **out);

// Stores member `index`'s flip mask (bit `i` = root `i` flipped) in `bits`.
//
// # Safety
// `family` must be a valid handle; `bits` a valid destination.
enum BsStatus bs_family_member_mask(const struct BsFamily *family, size_t index, uint64_t *bits);

// Reads a family from a JSON file.
//
// # Safety
// `path` must be a NUL-terminated string; `out` a valid destination.
enum BsStatus bs_family_read(const char *path, struct BsFamily **out);

// Writes a family to a JSON file.
//
// # Safety
// `path` must be a NUL-terminated string; `family` a valid handle.
enum BsStatus bs_family_write(const char *path, const struct BsFamily *family);

// Selects the `k`-member subset with the most uniform per-element transmit
// power after scaling the set to `total_power`. Writes the chosen member
// indices to `indices` (length `k`) and the worst-element deviation from
// the uniform target to `uniformity`. `use_variance_metric` switches the
// search score from worst-element deviation to variance; `budget = 0`
// applies the default exhaustive-search cap.
//
// # Safety
// `family` must be a valid handle; `indices` writable for `k` values;
// `uniformity` a valid destination.
enum BsStatus bs_select_subset(const struct BsFamily *family,
                               size_t k,
                               double total_power,
                               bool use_variance_metric,
                               uint64_t budget,
                               size_t *indices,
                               double *uniformity);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BEAMSPACE_H */
