#ifndef BARYNET_H
#define BARYNET_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible function.
 */
typedef enum {
  BARY_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  BARY_STATUS_NULL_ARGUMENT = 1,
  /**
   * Arguments violate a documented precondition.
   */
  BARY_STATUS_INVALID_ARGUMENT = 2,
  /**
   * Equal abscissas carry different ordinates.
   */
  BARY_STATUS_INCONSISTENT_FUNCTION = 3,
  /**
   * The operation needs at least one sample.
   */
  BARY_STATUS_EMPTY_INPUT = 4,
  /**
   * Total bar length is zero; entropy is undefined.
   */
  BARY_STATUS_DEGENERATE_BARCODE = 5,
  /**
   * A sample lies outside the model domain.
   */
  BARY_STATUS_OUT_OF_DOMAIN = 6,
  /**
   * The minimum-gap constraint cannot be satisfied.
   */
  BARY_STATUS_INFEASIBLE_GAP = 7,
  /**
   * An index is past the end of the collection.
   */
  BARY_STATUS_INDEX_OUT_OF_RANGE = 8,
  /**
   * An output buffer is too small.
   */
  BARY_STATUS_BUFFER_TOO_SMALL = 9,
  /**
   * A numerical operation failed (singular simplex and similar).
   */
  BARY_STATUS_NUMERICAL_FAILURE = 10,
  /**
   * The callee panicked; state is unchanged.
   */
  BARY_STATUS_INTERNAL_PANIC = 11,
} BaryStatus;

/**
 * Loss selector for training and evaluation.
 */
typedef enum {
  BARY_LOSS_MSE = 0,
  BARY_LOSS_RMSE = 1,
  BARY_LOSS_MAE = 2,
  BARY_LOSS_LOG_COSH = 3,
  BARY_LOSS_PE = 4,
  BARY_LOSS_LWPE = 5,
} BaryLoss;

/**
 * A persistence barcode (opaque).
 */
typedef struct BaryBarcode BaryBarcode;

/**
 * An immutable sampled function (opaque).
 */
typedef struct BaryCloud BaryCloud;

/**
 * A trained or hand-built base configuration with its evaluator (opaque).
 */
typedef struct BaryModel BaryModel;

/**
 * One persistence interval.
 */
typedef struct {
  double birth;
  double death;
  /**
   * Sample index of the local minimum that birthed the component.
   */
  size_t birth_index;
  /**
   * Sample index of the merging maximum (global maximum for the
   * essential bar).
   */
  size_t death_index;
  bool essential;
} BaryBar;

/**
 * Training protocol. `min_gap <= 0` selects the default gap of 1e-3 of
 * the domain span.
 */
typedef struct {
  size_t n_base_points;
  size_t epochs;
  double learning_rate;
  uint64_t seed;
  BaryLoss loss;
  bool train_x;
  bool train_y;
  double min_gap;
} BaryTrainOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *bary_version(void);

/**
 * Copy the most recent error message for this thread into `buf` (always
 * NUL-terminated when `cap > 0`) and return the full length including the
 * terminator. Call with `buf = NULL` to query the required capacity.
 *
 * # Safety
 * `buf` must point to at least `cap` writable bytes, or be null.
 */
size_t bary_last_error_message(char *buf, size_t cap);

/**
 * Build a cloud from parallel coordinate arrays. The input is sorted by
 * `x` and duplicate points collapse; equal `x` with different `y` fails.
 *
 * # Safety
 * `xs` and `ys` must point to `len` readable doubles; `out` must be a
 * valid location for a handle.
 */
BaryStatus bary_cloud_new(const double *xs, const double *ys, size_t len, BaryCloud **out);

/**
 * Equispaced samples of `sin(x)` on `[a, b]` with optional seeded
 * Gaussian noise.
 *
 * # Safety
 * `out` must be a valid location for a handle.
 */
BaryStatus bary_cloud_sine(size_t n_points,
                           double a,
                           double b,
                           double noise_sigma,
                           uint64_t seed,
                           BaryCloud **out);

/**
 * Number of (canonicalized) samples; 0 for a null handle.
 *
 * # Safety
 * `cloud` must be a live handle from this library or null.
 */
size_t bary_cloud_len(const BaryCloud *cloud);

/**
 * Copy the canonical samples into caller-provided arrays of capacity
 * `cap`.
 *
 * # Safety
 * `xs_out` and `ys_out` must point to `cap` writable doubles.
 */
BaryStatus bary_cloud_get(const BaryCloud *cloud, double *xs_out, double *ys_out, size_t cap);

/**
 * # Safety
 * `cloud` must be a handle from this library, not yet freed.
 */
void bary_cloud_free(BaryCloud *cloud);

/**
 * Build a model from strictly increasing abscissas and their values.
 *
 * # Safety
 * `xs` and `ys` must point to `len` readable doubles; `out` must be a
 * valid location for a handle.
 */
BaryStatus bary_model_new(const double *xs, const double *ys, size_t len, BaryModel **out);

/**
 * Number of base points; 0 for a null handle.
 *
 * # Safety
 * `model` must be a live handle from this library or null.
 */
size_t bary_model_len(const BaryModel *model);

/**
 * Copy the base points into caller-provided arrays of capacity `cap`.
 *
 * # Safety
 * `xs_out` and `ys_out` must point to `cap` writable doubles.
 */
BaryStatus bary_model_get(const BaryModel *model, double *xs_out, double *ys_out, size_t cap);

/**
 * Evaluate the network at `x`: barycentric interpolation inside the
 * domain, exactly zero outside. Returns NaN for a null handle.
 *
 * # Safety
 * `model` must be a live handle from this library or null.
 */
double bary_model_eval(const BaryModel *model, double x);

/**
 * Evaluate the network at `len` points.
 *
 * # Safety
 * `xs` must point to `len` readable doubles and `out` to `len` writable
 * doubles.
 */
BaryStatus bary_model_eval_many(const BaryModel *model, const double *xs, double *out, size_t len);

/**
 * # Safety
 * `model` must be a handle from this library, not yet freed.
 */
void bary_model_free(BaryModel *model);

/**
 * 0-dimensional lower-star barcode of the cloud.
 *
 * # Safety
 * `out` must be a valid location for a handle.
 */
BaryStatus bary_barcode_compute(const BaryCloud *cloud, BaryBarcode **out);

/**
 * Number of bars; 0 for a null handle.
 *
 * # Safety
 * `barcode` must be a live handle from this library or null.
 */
size_t bary_barcode_len(const BaryBarcode *barcode);

/**
 * Fetch one bar by index.
 *
 * # Safety
 * `out` must point to a writable `BaryBar`.
 */
BaryStatus bary_barcode_bar(const BaryBarcode *barcode, size_t index, BaryBar *out);

/**
 * The `k` longest bars as a new barcode handle (`k >= 1`).
 *
 * # Safety
 * `out` must be a valid location for a handle.
 */
BaryStatus bary_barcode_top_k(const BaryBarcode *barcode, size_t k, BaryBarcode **out);

/**
 * Persistent entropy of the barcode.
 *
 * # Safety
 * `out` must point to a writable double.
 */
BaryStatus bary_barcode_entropy(const BaryBarcode *barcode, double *out);

/**
 * Length-weighted persistent entropy of the barcode.
 *
 * # Safety
 * `out` must point to a writable double.
 */
BaryStatus bary_barcode_lwpe(const BaryBarcode *barcode, double *out);

/**
 * # Safety
 * `barcode` must be a handle from this library, not yet freed.
 */
void bary_barcode_free(BaryBarcode *barcode);

/**
 * Train a model on `cloud` under `options` and return the final model.
 * Deterministic for identical inputs.
 *
 * # Safety
 * `options` must point to a readable `BaryTrainOptions`; `out` must be a
 * valid location for a handle.
 */
BaryStatus bary_train(const BaryCloud *cloud, const BaryTrainOptions *options, BaryModel **out);

/**
 * Loss of the model's prediction against `cloud` (the model is evaluated
 * at every cloud abscissa first).
 *
 * # Safety
 * `out` must point to a writable double.
 */
BaryStatus bary_loss_value(const BaryModel *model,
                           const BaryCloud *cloud,
                           BaryLoss loss,
                           double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BARYNET_H */
