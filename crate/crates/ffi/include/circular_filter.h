#ifndef CIRCULAR_FILTER_H
#define CIRCULAR_FILTER_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Outcome of a call. `CF_STATUS_OK` is zero.
typedef enum CfStatus {
  CF_STATUS_OK = 0,
  CF_STATUS_NULL_POINTER = 1,
  CF_STATUS_DOMAIN = 2,
  CF_STATUS_RANGE = 3,
  CF_STATUS_DEGENERATE_MOMENT = 4,
  CF_STATUS_DEGENERATE_PRODUCT = 5,
  CF_STATUS_INFEASIBLE_MOMENTS = 6,
  CF_STATUS_ZERO_LIKELIHOOD = 7,
  CF_STATUS_PROGRESSION_STALL = 8,
  CF_STATUS_PARTICLE_DEGENERACY = 9,
  CF_STATUS_NUMERICAL = 10,
  CF_STATUS_UNSUPPORTED = 11,
  CF_STATUS_LENGTH_MISMATCH = 12,
  CF_STATUS_PANIC = 13,
} CfStatus;

// Deterministic sampler selection.
typedef enum CfSampler {
  CF_SAMPLER_WD3 = 0,
  CF_SAMPLER_WD5 = 1,
} CfSampler;

// Opaque filter handle.
typedef struct CfFilter CfFilter;

// `x ↦ a(x)`; `user_data` is passed through unchanged.
typedef double (*CfAdditiveFn)(double x, void *user_data);

// `(x, w) ↦ a(x, w)`.
typedef double (*CfArbitraryFn)(double x, double w, void *user_data);

// `x ↦ ln f(z | x)` for the measurement the caller has bound; `-inf` is
// allowed, NaN is not.
typedef double (*CfLogLikelihoodFn)(double x, void *user_data);

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread. The pointer stays valid
// until the next failing call on the same thread.
const char *cf_last_error_message(void);

// Static description of a status code.
const char *cf_status_name(enum CfStatus status);

// New filter with a wrapped normal estimate. Free with [`cf_filter_free`].
enum CfStatus cf_filter_new_wn(double mu, double sigma, struct CfFilter **out);

// New filter with a von Mises estimate. Free with [`cf_filter_free`].
enum CfStatus cf_filter_new_vm(double mu, double kappa, struct CfFilter **out);

// Release a handle; null is ignored.
void cf_filter_free(struct CfFilter *filter);

// Choose the deterministic sampler. `lambda` is used by WD5 only.
enum CfStatus cf_filter_set_sampler(struct CfFilter *filter, enum CfSampler sampler, double lambda);

enum CfStatus cf_filter_set_progression_threshold(struct CfFilter *filter, double r);

// Prediction for `x ↦ a(x) + w` with `w ~ WN(noise_mu, noise_sigma)`.
enum CfStatus cf_filter_predict_additive(struct CfFilter *filter,
                                         CfAdditiveFn a,
                                         void *user_data,
                                         double noise_mu,
                                         double noise_sigma);

// Prediction for `x ↦ a(x, w)` with `w ~ WN(noise_mu, noise_sigma)`,
// sampled with the filter's sampler.
enum CfStatus cf_filter_predict_arbitrary(struct CfFilter *filter,
                                          CfArbitraryFn a,
                                          void *user_data,
                                          double noise_mu,
                                          double noise_sigma);

// Closed-form update for `z = x + v`, `v ~ WN(noise_mu, noise_sigma)`;
// needs a wrapped normal estimate.
enum CfStatus cf_filter_update_identity_wn(struct CfFilter *filter,
                                           double z,
                                           double noise_mu,
                                           double noise_sigma);

// Closed-form update for `z = x + v`, `v ~ VM(noise_mu, noise_kappa)`;
// needs a von Mises estimate.
enum CfStatus cf_filter_update_identity_vm(struct CfFilter *filter,
                                           double z,
                                           double noise_mu,
                                           double noise_kappa);

// Progressive update with a caller-supplied log-likelihood. On success
// the number of partial steps is written to `steps_out` unless it is null.
enum CfStatus cf_filter_update_progressive(struct CfFilter *filter,
                                           CfLogLikelihoodFn ln_likelihood,
                                           void *user_data,
                                           size_t *steps_out);

// Circular mean of the estimate in `[0, 2π)`.
enum CfStatus cf_filter_mean(const struct CfFilter *filter, double *out);

// First circular moment of the estimate.
enum CfStatus cf_filter_first_moment(const struct CfFilter *filter, double *re, double *im);

// Concentration parameter of the estimate: `sigma` for a wrapped normal,
// `kappa` for a von Mises.
enum CfStatus cf_filter_concentration(const struct CfFilter *filter, double *out);

enum CfStatus cf_bessel_i(uint32_t n, double x, double *out);

// `I1(x) / I0(x)`.
enum CfStatus cf_bessel_ratio(double x, double *out);

// Inverse of [`cf_bessel_ratio`] on `[0, 1)`.
enum CfStatus cf_bessel_ratio_inv(double y, double *out);

// Complex error function.
enum CfStatus cf_erf_complex(double re, double im, double *out_re, double *out_im);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CIRCULAR_FILTER_H */
