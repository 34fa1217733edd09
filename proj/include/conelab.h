/* SPDX-License-Identifier: Apache-2.0 */
#ifndef CONELAB_H
#define CONELAB_H

/*
 * C interface to the conelab core. All functions return a clab_status; on
 * any status other than CLAB_OK the output parameters are untouched and
 * clab_last_error() carries a thread-local description of the failure.
 * Objects are opaque handles created by *_new and released by *_free.
 */

#include <stdint.h>
#include <stddef.h>

#if defined(_WIN32)
#define CONELAB_API __declspec(dllexport)
#else
#define CONELAB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum clab_status {
  CLAB_OK = 0,
  CLAB_E_INVALID = 1,
  CLAB_E_DEGENERATE = 2,
  CLAB_E_EVEN_MODULUS = 3,
  CLAB_E_PRINCIPAL = 4,
  CLAB_E_NOT_COPRIME = 5,
  CLAB_E_BUDGET = 6,
  CLAB_E_ZERO_DUAL = 7,
  CLAB_E_BAD_EXTENTS = 8,
  CLAB_E_NOT_STABILIZED = 9,
  CLAB_E_GRID = 10,
  CLAB_E_ASYMMETRIC = 11,
  CLAB_E_HYPOTHESIS = 12,
  CLAB_E_CONFIG = 13,
  CLAB_E_INTERNAL = 14,
  CLAB_E_NOMEM = 15
} clab_status;

typedef struct clab_form clab_form;
typedef struct clab_sumctx clab_sumctx;

CONELAB_API const char* clab_version(void);

/* Thread-local message for the most recent failing call on this thread. */
CONELAB_API const char* clab_last_error(void);

/* Ternary quadratic forms: coeffs = (a,b,c,d,e,f) for
 * a x1^2 + b x2^2 + c x3^2 + d x1 x2 + e x1 x3 + f x2 x3. */
CONELAB_API clab_status clab_form_new(const int64_t coeffs[6], clab_form** out);
CONELAB_API void clab_form_free(clab_form* form);
CONELAB_API clab_status clab_form_eval(const clab_form* form, const int64_t x[3], int64_t* out);
CONELAB_API clab_status clab_form_dual_eval(const clab_form* form, const int64_t c[3],
                                            int64_t* out);
CONELAB_API clab_status clab_form_delta(const clab_form* form, int64_t* out);
CONELAB_API clab_status clab_form_signature(const clab_form* form, int* positives,
                                            int* negatives);
CONELAB_API clab_status clab_form_bad_modulus(const clab_form* form, int64_t L, int64_t* out);

/* Elementary arithmetic. */
CONELAB_API clab_status clab_jacobi(int64_t a, int64_t n, int* out);
CONELAB_API clab_status clab_mobius(int64_t n, int* out);
CONELAB_API clab_status clab_euler_phi(int64_t n, int64_t* out);
CONELAB_API clab_status clab_gauss_iota(int64_t q, double* re, double* im);
CONELAB_API clab_status clab_salie_t(int64_t x, int64_t fstar, double* re, double* im);

/* Complete exponential sums over a congruence context (L, lambda). */
CONELAB_API clab_status clab_sumctx_new(const clab_form* form, int64_t L,
                                        const int64_t lambda[3], clab_sumctx** out);
CONELAB_API void clab_sumctx_free(clab_sumctx* ctx);
CONELAB_API clab_status clab_sum_sq(const clab_sumctx* ctx, int64_t q, const int64_t c[3],
                                    double* re, double* im);

/* Stabilized p-adic density as an exact rational num/den; gamma may be NULL
 * for the unconstrained density (L is ignored then). */
CONELAB_API clab_status clab_local_density(const clab_form* form, int64_t p, int64_t L,
                                           const int64_t* gamma3, int primitive, int64_t* num,
                                           int64_t* den, int* stabilized);

/* Configuration-driven command interface; commands and config schema match
 * the conelab CLI. The returned report string is owned by the caller and
 * must be released with clab_string_free. */
CONELAB_API const char* const* clab_command_names(size_t* count);
CONELAB_API clab_status clab_run_json(const char* command, const char* config_json,
                                      char** report_json);
CONELAB_API void clab_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* CONELAB_H */
