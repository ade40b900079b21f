#ifndef KG_H
#define KG_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum KgStatus {
  KG_STATUS_OK = 0,
  KG_STATUS_NULL_POINTER = 1,
  KG_STATUS_INVALID_ARGUMENT = 2,
  KG_STATUS_PARSE = 3,
  KG_STATUS_VALIDATION = 4,
  KG_STATUS_NOT_POSITIVE_DEFINITE = 5,
  KG_STATUS_CONTRACTION_NOT_LESS_THAN_ONE = 6,
  KG_STATUS_NON_REAL_SPECTRUM = 7,
  KG_STATUS_SOLVER = 8,
  KG_STATUS_IO = 9,
  KG_STATUS_BUFFER_TOO_SMALL = 10,
  KG_STATUS_PANIC = 11,
} KgStatus;

/**
 * Sign of `(Jx, x)` for each eigenvector, as returned by
 * `kg_spectrum_sign_types`. Non-real eigenvalues are neutral.
 */
typedef enum KgSignType {
  KG_SIGN_TYPE_NEGATIVE = -1,
  KG_SIGN_TYPE_NEUTRAL = 0,
  KG_SIGN_TYPE_POSITIVE = 1,
} KgSignType;

/**
 * A model `(U², V)`.
 */
typedef struct KgModel KgModel;

/**
 * Eigenvalues of `H` at one shift, sorted by real part.
 */
typedef struct KgSpectrum KgSpectrum;

/**
 * Relative constants for one perturbation `δV`. A constant that does not
 * apply to the perturbation is reported as NaN.
 */
typedef struct KgBounds {
  double contraction;
  double c;
  double gap_alpha;
  double kappa_general;
  double kappa_split;
  double kappa_sum;
  double kappa_relative;
  double kappa_disjoint;
  double kappa_signed_minus;
  double kappa_signed_plus;
  double kappa_block_minus;
  double kappa_block_plus;
  double kappa_exact_minus;
  double kappa_exact_plus;
} KgBounds;

/**
 * True deviations of a perturbed spectrum.
 */
typedef struct KgVerification {
  double max_relative_deviation;
  /**
   * 1 when every applicable bound and inclusion holds.
   */
  int32_t all_hold;
  /**
   * 1 when the perturbed spectrum is not real.
   */
  int32_t perturbed_complex;
} KgVerification;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version, a static NUL-terminated string.
 */
const char *kg_version(void);

/**
 * Message for the last failed call on this thread, empty after a success.
 */
const char *kg_last_error_message(void);

/**
 * Model from row-major `n×n` arrays `u_squared` (positive definite) and `v`.
 */
enum KgStatus kg_model_new(size_t n,
                           const double *u_squared,
                           const double *v,
                           struct KgModel **out);

/**
 * `U² = [[2, -1], [-1, 2]]`, `V = τ·diag(-1, 0)`.
 */
enum KgStatus kg_model_square_well(double tau, struct KgModel **out);

/**
 * Finite-difference oscillator `U² = -d²/dx² + x² + β`, `V = αx` on
 * `grid_points` interior points of `(-half_width, half_width)`.
 */
enum KgStatus kg_model_harmonic(double alpha,
                                double beta,
                                size_t grid_points,
                                double half_width,
                                struct KgModel **out);

/**
 * Model from a JSON file.
 */
enum KgStatus kg_model_load(const char *path, struct KgModel **out);

void kg_model_free(struct KgModel *model);

enum KgStatus kg_model_order(const struct KgModel *model, size_t *out);

/**
 * `b = ‖(V - μ)U^{-1}‖`.
 */
enum KgStatus kg_contraction(const struct KgModel *model, double shift, double *out);

/**
 * Shift minimizing the contraction, and the minimum.
 */
enum KgStatus kg_optimize_shift(const struct KgModel *model,
                                double *shift_out,
                                double *contraction_out);

enum KgStatus kg_spectrum_compute(const struct KgModel *model,
                                  double shift,
                                  struct KgSpectrum **out);

void kg_spectrum_free(struct KgSpectrum *spectrum);

/**
 * Number of eigenvalues, `2n`.
 */
enum KgStatus kg_spectrum_len(const struct KgSpectrum *spectrum, size_t *out);

/**
 * 1 when every eigenvalue is real, 0 otherwise.
 */
enum KgStatus kg_spectrum_is_real(const struct KgSpectrum *spectrum, int32_t *out);

/**
 * Copies real and imaginary parts into arrays of `capacity` doubles.
 */
enum KgStatus kg_spectrum_eigenvalues(const struct KgSpectrum *spectrum,
                                      double *re,
                                      double *im,
                                      size_t capacity);

enum KgStatus kg_spectrum_sign_types(const struct KgSpectrum *spectrum,
                                     enum KgSignType *out,
                                     size_t capacity);

/**
 * Every relative constant for the row-major `n×n` perturbation `delta_v`.
 */
enum KgStatus kg_bounds(const struct KgModel *model,
                        const double *delta_v,
                        double shift,
                        struct KgBounds *out);

/**
 * Spectra of the model and of `V + δV`, compared at `shift`.
 */
enum KgStatus kg_verify(const struct KgModel *model,
                        const double *delta_v,
                        double shift,
                        struct KgVerification *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KG_H */
