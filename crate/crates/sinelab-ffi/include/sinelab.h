/* C interface to the sinelab eigenangle-kernel library. */

#pragma once

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Ensemble selectors accepted wherever a function takes an `ensemble` int.
#define SLB_ENSEMBLE_U 0

#define SLB_ENSEMBLE_SO_EVEN 1

#define SLB_ENSEMBLE_SO_ODD 2

#define SLB_ENSEMBLE_SO_MINUS_ODD 3

#define SLB_ENSEMBLE_SO_MINUS_EVEN 4

#define SLB_ENSEMBLE_SP 5

#define SLB_ENSEMBLE_SINE 6

// Scaling selectors for [`slb_kernel_new`].
#define SLB_SCALING_RAW 0

#define SLB_SCALING_BULK 1

// Coefficient-table selectors for [`slb_coeff_float`].
#define SLB_COEFF_CSC 0

#define SLB_COEFF_COT 1

#define SLB_COEFF_TAN 2

#define SLB_COEFF_BERNOULLI 3

// Result codes returned by every fallible entry point.
typedef enum SlbStatus {
  SLB_STATUS_OK = 0,
  // A parameter was malformed (bad enum value, empty list, bad interval).
  SLB_STATUS_INVALID_ARGUMENT = 1,
  // Parameters were well-formed but outside a kernel's domain.
  SLB_STATUS_DOMAIN_ERROR = 2,
  // The computation could not meet its numerical contract.
  SLB_STATUS_NUMERICAL_ERROR = 3,
  // A required pointer was null.
  SLB_STATUS_NULL_POINTER = 4,
  // An internal invariant failed; the library state is still valid.
  SLB_STATUS_PANIC = 5,
} SlbStatus;

// Opaque handle holding the eigenangles of a batch of Haar samples.
typedef struct SlbAngles SlbAngles;

// Opaque kernel handle (ensemble, size parameter, scaling).
typedef struct SlbKernel SlbKernel;

// Opaque integer-law handle (a PMF on 0..len).
typedef struct SlbLaw SlbLaw;

// Opaque rate-sweep report handle.
typedef struct SlbReport SlbReport;

// One sweep row, copied out of an [`SlbReport`].
typedef struct SlbRateRow {
  uint32_t n;
  double s;
  double w1;
  double dtv;
  double trace_norm;
  double bound_shape;
  double ratio;
  // NaN when the Monte Carlo cross-check was disabled.
  double mc_tv;
} SlbRateRow;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the most recent failure on this thread, NUL-terminated. The
// pointer stays valid until the next failing call on the same thread.
const char *slb_last_error_message(void);

// Create a kernel handle. `n` is the nontrivial-eigenangle count (ignored
// for the sine ensemble).
enum SlbStatus slb_kernel_new(int32_t ensemble,
                              uint32_t n,
                              int32_t scaling,
                              struct SlbKernel **out);

// Release a kernel handle. Null is ignored.
void slb_kernel_free(struct SlbKernel *kernel);

// Evaluate the kernel at one point.
enum SlbStatus slb_kernel_eval(const struct SlbKernel *kernel, double x, double y, double *out);

// Float view of entry `k` of a coefficient table (see the SLB_COEFF
// selectors).
enum SlbStatus slb_coeff_float(int32_t kind, uint32_t k, double *out);

// Growth ratio of consecutive even-index Bernoulli magnitudes at index `n`.
enum SlbStatus slb_growth_ratio(uint32_t n, double *out);

// Exact counting law of the kernel's point process restricted to
// [lo, hi], via a Nystrom discretization with `grid_size` nodes.
enum SlbStatus slb_count_law(const struct SlbKernel *kernel,
                             double lo,
                             double hi,
                             uint32_t grid_size,
                             struct SlbLaw **out);

// Empirical counting law of bulk-rescaled eigenangles over `num_samples`
// Haar draws. `n` is the nontrivial-eigenangle count.
enum SlbStatus slb_mc_count_law(int32_t ensemble,
                                uint32_t n,
                                double lo,
                                double hi,
                                uint64_t num_samples,
                                uint64_t seed,
                                struct SlbLaw **out);

// Support size of the law (its PMF has entries 0..len-1).
enum SlbStatus slb_law_len(const struct SlbLaw *law, size_t *out);

// Copy the PMF into `buf`; `buf_len` must be at least the support size.
enum SlbStatus slb_law_pmf(const struct SlbLaw *law, double *buf, size_t buf_len);

enum SlbStatus slb_law_mean(const struct SlbLaw *law, double *out);

enum SlbStatus slb_law_variance(const struct SlbLaw *law, double *out);

// Wasserstein-1 distance between two integer laws.
enum SlbStatus slb_law_w1(const struct SlbLaw *a, const struct SlbLaw *b, double *out);

// Total-variation distance between two integer laws.
enum SlbStatus slb_law_tv(const struct SlbLaw *a, const struct SlbLaw *b, double *out);

// Release a law handle. Null is ignored.
void slb_law_free(struct SlbLaw *law);

// Distances between the kernel's counting law and the sine one on
// [lo, hi], plus the trace norm of the kernel difference there. Any of the
// three out-pointers may be null to skip that figure.
enum SlbStatus slb_distance_to_sine(const struct SlbKernel *kernel,
                                    double lo,
                                    double hi,
                                    uint32_t grid_size,
                                    double *out_dtv,
                                    double *out_w1,
                                    double *out_trace_norm);

// Draw `count` Haar samples and keep their nontrivial eigenangles, both as
// raw angles and bulk-rescaled. `n` is the nontrivial-eigenangle count.
enum SlbStatus slb_sample_angles(int32_t ensemble,
                                 uint32_t n,
                                 uint64_t count,
                                 uint64_t seed,
                                 struct SlbAngles **out);

enum SlbStatus slb_angles_sample_count(const struct SlbAngles *angles, size_t *out);

enum SlbStatus slb_angles_per_sample(const struct SlbAngles *angles, size_t *out);

// Copy angles row-major (sample index major) into `buf`. Pass a nonzero
// `rescaled` to copy the bulk-rescaled values instead of raw angles.
// `buf_len` must be at least sample_count * per_sample.
enum SlbStatus slb_angles_copy(const struct SlbAngles *angles,
                               int32_t rescaled,
                               double *buf,
                               size_t buf_len);

// Release an angle batch. Null is ignored.
void slb_angles_free(struct SlbAngles *angles);

// Run a distance-to-sine rate sweep over the given eigenangle counts.
// `mc_samples` of zero disables the Monte Carlo cross-check column.
enum SlbStatus slb_rate_sweep(int32_t ensemble,
                              const uint32_t *n_values,
                              size_t n_values_len,
                              double s,
                              uint32_t grid_size,
                              uint64_t seed,
                              uint64_t mc_samples,
                              struct SlbReport **out);

enum SlbStatus slb_report_row_count(const struct SlbReport *report, size_t *out);

// Copy row `index` of the report.
enum SlbStatus slb_report_row(const struct SlbReport *report, size_t index, struct SlbRateRow *out);

// Fitted log-log slopes and their r-squared values. Any out-pointer may be
// null to skip that figure.
enum SlbStatus slb_report_fit(const struct SlbReport *report,
                              double *out_slope_w1,
                              double *out_slope_trace_norm,
                              double *out_r_squared_w1,
                              double *out_r_squared_trace_norm);

// Release a report handle. Null is ignored.
void slb_report_free(struct SlbReport *report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus
