#ifndef NEUMANN_STO_H
#define NEUMANN_STO_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes.
 */
typedef enum NstoStatus {
  NSTO_STATUS_OK = 0,
  NSTO_STATUS_NULL_POINTER = 1,
  NSTO_STATUS_DOMAIN = 2,
  NSTO_STATUS_OVERFLOW = 3,
  NSTO_STATUS_NO_CONVERGENCE = 4,
  NSTO_STATUS_SERIES_DIVERGED = 5,
  NSTO_STATUS_PRECISION = 6,
  NSTO_STATUS_INVALID_SETTINGS = 7,
  NSTO_STATUS_BUFFER_TOO_SMALL = 8,
  NSTO_STATUS_INTERNAL = 9,
  NSTO_STATUS_PANIC = 10,
} NstoStatus;

/**
 * Series settings and the order switch of the Neumann driver.
 */
typedef struct NstoSettings NstoSettings;

/**
 * Cached basic integrals at one `(α₁, α₂)`.
 */
typedef struct NstoWContext NstoWContext;

/**
 * Outcome of a truncated series.
 */
typedef struct NstoOutcome {
  double value;
  uint32_t terms_used;
  bool converged;
  double est_rel_error;
} NstoOutcome;

/**
 * Parameters of a generic two-centre integral.
 */
typedef struct NstoGenericRequest {
  uint32_t p1;
  uint32_t q1;
  uint32_t p2;
  uint32_t q2;
  uint32_t sigma;
  double alpha1;
  double alpha2;
  double beta1;
  double beta2;
  double r;
} NstoGenericRequest;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the last error message of this thread into `buf` (NUL
 * terminated, truncated to `len`). Returns the full message length.
 *
 * # Safety
 * `buf` must be null or valid for `len` bytes.
 */
size_t nsto_last_error(char *buf, size_t len);

/**
 * Creates settings: relative tolerance, term cap and order switch.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum NstoStatus nsto_settings_new(double rel_tol,
                                  uint32_t max_terms,
                                  uint32_t mu_switch,
                                  struct NstoSettings **out);

/**
 * Releases settings created by [`nsto_settings_new`]. Null is ignored.
 *
 * # Safety
 * `s` must come from [`nsto_settings_new`] and not be used afterwards.
 */
void nsto_settings_free(struct NstoSettings *s);

/**
 * `L_μ^σ(p, α)`. Null `settings` selects the defaults.
 *
 * # Safety
 * `settings` must be null or a live handle; `out` valid for writes.
 */
enum NstoStatus nsto_l(uint32_t mu,
                       uint32_t sigma,
                       uint32_t p,
                       double alpha,
                       const struct NstoSettings *settings,
                       struct NstoOutcome *out);

/**
 * Creates a context for `W` evaluations at `(α₁, α₂)`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum NstoStatus nsto_w_context_new(double alpha1, double alpha2, struct NstoWContext **out);

/**
 * Releases a context. Null is ignored.
 *
 * # Safety
 * `ctx` must come from [`nsto_w_context_new`] and not be used afterwards.
 */
void nsto_w_context_free(struct NstoWContext *ctx);

/**
 * `W_μ^σ(p₁, p₂; α₁, α₂)` by the large-order engine at the context's
 * exponents. A non-converged series is reported through `out->converged`.
 *
 * # Safety
 * `ctx` must be a live handle used by one thread at a time; `settings`
 * null or live; `out` valid for writes.
 */
enum NstoStatus nsto_w(struct NstoWContext *ctx,
                       uint32_t p1,
                       uint32_t p2,
                       uint32_t sigma,
                       uint32_t mu,
                       const struct NstoSettings *settings,
                       struct NstoOutcome *out);

/**
 * η-integral `i_μ^σ(q, β)`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum NstoStatus nsto_eta_integral(uint32_t mu,
                                  uint32_t sigma,
                                  uint32_t q,
                                  double beta,
                                  double *out);

/**
 * `k_μ^σ(p, α)`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum NstoStatus nsto_k_integral(uint32_t mu, uint32_t sigma, uint32_t p, double alpha, double *out);

/**
 * The Neumann series of a generic integral.
 *
 * # Safety
 * `req` must be valid for reads; `settings` null or live; `out` valid for
 * writes.
 */
enum NstoStatus nsto_neumann_sum(const struct NstoGenericRequest *req,
                                 const struct NstoSettings *settings,
                                 struct NstoOutcome *out);

/**
 * Oracle `L_μ^σ(p, α)` as a decimal string certified to `*digits` digits.
 *
 * # Safety
 * `buf` must be valid for `len` bytes; `digits` null or valid for writes.
 */
enum NstoStatus nsto_oracle_l(uint32_t mu,
                              uint32_t sigma,
                              uint32_t p,
                              double alpha,
                              uint32_t target_digits,
                              char *buf,
                              size_t len,
                              uint32_t *digits);

/**
 * Oracle `W_μ^σ(p₁, p₂; α₁, α₂)` as a decimal string.
 *
 * # Safety
 * As [`nsto_oracle_l`].
 */
enum NstoStatus nsto_oracle_w(uint32_t p1,
                              uint32_t p2,
                              uint32_t sigma,
                              double alpha1,
                              double alpha2,
                              uint32_t mu,
                              uint32_t target_digits,
                              char *buf,
                              size_t len,
                              uint32_t *digits);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NEUMANN_STO_H */
