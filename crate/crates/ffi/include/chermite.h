/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef CHERMITE_H
#define CHERMITE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
typedef enum ChStatus {
  CH_STATUS_OK = 0,
  // An argument lies outside the region where the quantity is defined.
  CH_STATUS_DOMAIN = 1,
  // A truncated series did not settle below its tail tolerance.
  CH_STATUS_NON_CONVERGENCE = 2,
  CH_STATUS_INVALID_ARGUMENT = 3,
  CH_STATUS_NULL_POINTER = 4,
  CH_STATUS_PANIC = 5,
} ChStatus;

// Exact polynomial in `z`, `zbar` and `nu` with integer coefficients.
typedef struct ChPoly ChPoly;

// Tensor-product Gauss–Hermite rule.
typedef struct ChRule ChRule;

// Reports of a verification run.
typedef struct ChSuite ChSuite;

typedef struct ChComplex {
  double re;
  double im;
} ChComplex;

// Value and tail estimate of a truncated series.
typedef struct ChSeries {
  struct ChComplex value;
  double tail;
  size_t max_order;
} ChSeries;

// Arguments of the generating-function and Mehler kernels. Unused fields
// are ignored.
typedef struct ChKernelArgs {
  struct ChComplex u;
  struct ChComplex v;
  struct ChComplex z;
  struct ChComplex w;
  double nu;
  double nu_prime;
} ChKernelArgs;

// Arguments of the heat kernel `K_nu(t; z, z0)`.
typedef struct ChHeatArgs {
  double t;
  struct ChComplex z;
  struct ChComplex z0;
  double nu;
} ChHeatArgs;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent failure on the calling thread; empty after a
// success. The pointer stays valid until the next call on this thread.
const char *ch_last_error_message(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must be null or a pointer returned by this library that has not been
// freed.
void ch_string_free(char *s);

// `H^nu_{m,n}(z, zbar)`.
//
// # Safety
// `out` must be valid for writes.
enum ChStatus ch_chp_eval(uint32_t m,
                          uint32_t n,
                          struct ChComplex z,
                          double nu,
                          struct ChComplex *out);

// `H^nu_{m,n}(0) = (-nu)^m m! delta_{m,n}`.
//
// # Safety
// `out` must be valid for writes.
enum ChStatus ch_chp_zero_value(uint32_t m, uint32_t n, double nu, struct ChComplex *out);

// Physicists' Hermite polynomial `H_n(x)`.
double ch_real_hermite(uint32_t n, double x);

// Generalised Laguerre polynomial `L^(alpha)_n(x)`.
double ch_laguerre(uint32_t n, double alpha, double x);

// The explicit-sum polynomial `H^nu_{m,n}`.
struct ChPoly *ch_poly_new_chp(uint32_t m, uint32_t n);

// `H^nu_{m,n}` by repeated differentiation of the Gaussian.
struct ChPoly *ch_poly_new_rodrigues(uint32_t m, uint32_t n);

// The magnetic Laplacian applied to `p`, as a new polynomial; null if `p` is null.
//
// # Safety
// `p` must be null or a live handle.
struct ChPoly *ch_poly_laplacian(const struct ChPoly *p);

// `p` multiplied by `k * nu`; null if `p` is null.
//
// # Safety
// `p` must be null or a live handle.
struct ChPoly *ch_poly_scale_nu(const struct ChPoly *p, int64_t k);

// 1 if the polynomials are identical, 0 if not, -1 if either is null.
//
// # Safety
// Both pointers must be null or live handles.
int32_t ch_poly_equal(const struct ChPoly *a, const struct ChPoly *b);

// Number of nonzero terms, or 0 for null.
//
// # Safety
// `p` must be null or a live handle.
size_t ch_poly_term_count(const struct ChPoly *p);

// Evaluates `p` at `(z, conj(z), nu)`. With `exact` nonzero the sum is
// formed in rational arithmetic and rounded once.
//
// # Safety
// `p` must be a live handle and `out` valid for writes.
enum ChStatus ch_poly_eval(const struct ChPoly *p,
                           struct ChComplex z,
                           double nu,
                           int32_t exact,
                           struct ChComplex *out);

// Canonical text form, e.g. `nu^2*z*zbar - nu`. Free with [`ch_string_free`].
//
// # Safety
// `p` must be null or a live handle.
char *ch_poly_to_string(const struct ChPoly *p);

// # Safety
// `p` must be null or a handle not yet freed.
void ch_poly_free(struct ChPoly *p);

// Classical Mehler kernel `E_t(x, y)`; needs `|t| < 1`.
//
// # Safety
// `out` must be valid for writes.
enum ChStatus ch_classical_mehler_closed(double t, double x, double y, double *out);

// `sum t^n H_n(x) H_n(y) / (2^n n!)`.
//
// # Safety
// `out` must be valid for writes.
enum ChStatus ch_classical_mehler_series(double t,
                                         double x,
                                         double y,
                                         size_t max_order,
                                         double tail_tol,
                                         struct ChSeries *out);

// Creates a rule with `nodes_per_axis` nodes per axis for the weight
// `exp(-scale |xi|^2)`.
//
// # Safety
// `out` must be valid for writes.
enum ChStatus ch_rule_new(size_t nodes_per_axis, double scale, struct ChRule **out);

// # Safety
// `rule` must be null or a handle not yet freed.
void ch_rule_free(struct ChRule *rule);

// `int exp(-gamma|xi|^2 + alpha xi + beta conj(xi))` by quadrature. The rule
// is rescaled to `gamma`; only its node count is used.
//
// # Safety
// `rule` must be a live handle and `out` valid for writes.
enum ChStatus ch_gaussian_integral_quad(const struct ChRule *rule,
                                        double gamma,
                                        struct ChComplex alpha,
                                        struct ChComplex beta,
                                        struct ChComplex *out);

// `(pi/gamma) exp(alpha beta / gamma)`.
//
// # Safety
// `out` must be valid for writes.
enum ChStatus ch_gaussian_integral_closed(double gamma,
                                          struct ChComplex alpha,
                                          struct ChComplex beta,
                                          struct ChComplex *out);

// `int |H^nu_{m,n}|^2 exp(-nu|z|^2)` by quadrature with the rule rescaled to `nu`.
//
// # Safety
// `rule` must be a live handle and `out` valid for writes.
enum ChStatus ch_norm_squared_quad(const struct ChRule *rule,
                                   uint32_t m,
                                   uint32_t n,
                                   double nu,
                                   double *out);

// `(pi/nu) nu^(m+n) m! n!`.
//
// # Safety
// `out` must be valid for writes.
enum ChStatus ch_norm_squared_closed(uint32_t m, uint32_t n, double nu, double *out);

// `H^nu_{m,n}(z)` with `nu = alpha beta / mu` from its integral representation.
//
// # Safety
// `rule` must be a live handle and `out` valid for writes.
enum ChStatus ch_chp_integral_rep(const struct ChRule *rule,
                                  uint32_t m,
                                  uint32_t n,
                                  struct ChComplex z,
                                  double mu,
                                  struct ChComplex alpha,
                                  struct ChComplex beta,
                                  struct ChComplex *out);

// Number of identities in the catalog.
size_t ch_identity_count(void);

// Name of catalog entry `index` as a static string, or null when out of range.
const char *ch_identity_name(size_t index);

// Runs the verification suite. `ids` holds `n_ids` identity names; pass
// `n_ids = 0` to run the whole catalog.
//
// # Safety
// `ids` must point to `n_ids` valid C strings (or be null when `n_ids` is 0)
// and `out` must be valid for writes.
enum ChStatus ch_suite_run(uint64_t seed,
                           size_t samples_per_identity,
                           const char *const *ids,
                           size_t n_ids,
                           struct ChSuite **out);

// Number of reports, or 0 for null.
//
// # Safety
// `suite` must be null or a live handle.
size_t ch_suite_len(const struct ChSuite *suite);

// Report `index` as one line of JSON, owned by the suite; null when out of range.
//
// # Safety
// `suite` must be null or a live handle. The string lives as long as the suite.
const char *ch_suite_report_json(const struct ChSuite *suite, size_t index);

// Reports whose outcome differs from what their identity expects: a failure
// for an ordinary identity, or an unconfirmed mismatch for an expected-fail
// one. Returns `(size_t)-1` for null.
//
// # Safety
// `suite` must be null or a live handle.
size_t ch_suite_unexpected_failures(const struct ChSuite *suite);

// # Safety
// `suite` must be null or a handle not yet freed.
void ch_suite_free(struct ChSuite *suite);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CHERMITE_H */
