/* SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the tolstack tolerance stack-up library.
 *
 * Objects are opaque handles created by tls_*_create / tls_*_read / tls_*_run
 * and released with the matching tls_*_destroy. Every fallible call returns a
 * tls_status; on failure a human-readable message is available from
 * tls_last_error() on the calling thread until its next failing call.
 * Strings returned through char** are owned by the caller and released with
 * tls_string_free().
 */
#ifndef TOLSTACK_H
#define TOLSTACK_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32) || defined(__CYGWIN__)
#  ifdef TOLSTACK_BUILDING
#    define TLS_API __declspec(dllexport)
#  else
#    define TLS_API __declspec(dllimport)
#  endif
#elif defined(__GNUC__) && __GNUC__ >= 4
#  define TLS_API __attribute__((visibility("default")))
#else
#  define TLS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tls_status {
  TLS_OK = 0,
  TLS_ERR_INVALID_ARGUMENT = 1, /* null pointer, bad enum, buffer too small */
  TLS_ERR_DOMAIN = 2,           /* value outside its mathematical domain */
  TLS_ERR_PARSE = 3,
  TLS_ERR_VALIDATION = 4,       /* input violates a model invariant */
  TLS_ERR_IO = 5,
  TLS_ERR_NUMERIC = 6,          /* solver failure */
  TLS_ERR_INTERNAL = 7
} tls_status;

typedef enum tls_method {
  TLS_METHOD_WC = 0,
  TLS_METHOD_RSS = 1,
  TLS_METHOD_GAUSSIAN = 2,
  TLS_METHOD_HOEFFDING = 3,
  TLS_METHOD_CHERNOV = 4,
  TLS_METHOD_LIPSCHITZ = 5,
  TLS_METHOD_QUADRATIC = 6,
  TLS_METHOD_AIRBUS = 7,
  TLS_METHOD_MONTE_CARLO = 8
} tls_method;

#define TLS_ANALYTIC_METHOD_COUNT 8

typedef enum tls_format {
  TLS_FORMAT_TABLE = 0,
  TLS_FORMAT_CSV = 1,
  TLS_FORMAT_JSON = 2
} tls_format;

typedef struct tls_chain tls_chain;
typedef struct tls_curve tls_curve;
typedef struct tls_study tls_study;

typedef struct tls_result {
  tls_method method;
  double t;
  double t_clamped;
  double f;        /* NaN when has_rho == 0 */
  double coverage;
  double rho;
  int has_rho;
} tls_result;

typedef struct tls_balance {
  double mean;
  double variance;
  double abs_dev_sum;
  double s1;
  double d_factor;
} tls_balance;

typedef struct tls_options {
  int quadratic_sharp; /* 0: variance constant 1/2, 1: constant 1/6 */
} tls_options;

typedef struct tls_mc_config {
  uint64_t draws;
  uint64_t seed;
  unsigned threads; /* 0: hardware concurrency; results do not depend on it */
} tls_mc_config;

typedef struct tls_study_spec {
  int n_inputs;
  double bound_lo;
  double bound_hi;
  int n_chains;
  double rho;
  uint64_t seed;
  const tls_method* methods; /* NULL with n_methods == 0 selects all analytic methods */
  size_t n_methods;
  uint64_t mc_draws;         /* 0 disables the Monte Carlo column */
  unsigned threads;
} tls_study_spec;

TLS_API const char* tls_version(void);
TLS_API const char* tls_last_error(void);
TLS_API const char* tls_status_name(tls_status status);
TLS_API void tls_string_free(char* s);

TLS_API const char* tls_method_name(tls_method method);
TLS_API tls_status tls_method_parse(const char* name, tls_method* out);
/* Parses "m1,m2,..."; an empty list yields all analytic methods. */
TLS_API tls_status tls_method_list_parse(const char* list, tls_method* out, size_t capacity,
                                         size_t* count);
TLS_API tls_status tls_format_parse(const char* name, tls_format* out);

/* names may be NULL (contributors are then named x1..xn); influences may be
 * NULL (all 1). */
TLS_API tls_status tls_chain_create(const char* const* names, const double* half_widths,
                                    const double* influences, size_t n, tls_chain** out);
/* Format from the extension: .json is JSON, anything else CSV. */
TLS_API tls_status tls_chain_read(const char* path, tls_chain** out);
TLS_API void tls_chain_destroy(tls_chain* chain);
TLS_API size_t tls_chain_size(const tls_chain* chain);
TLS_API tls_status tls_chain_weighted_bounds(const tls_chain* chain, double* out, size_t capacity);
TLS_API tls_status tls_chain_balance(const tls_chain* chain, tls_balance* out);

TLS_API tls_status tls_compute(const tls_chain* chain, tls_method method, double rho,
                               const tls_options* options, tls_result* out);
/* Writes TLS_ANALYTIC_METHOD_COUNT results in method order. */
TLS_API tls_status tls_analyze_all(const tls_chain* chain, double rho, const tls_options* options,
                                   tls_result* out);
TLS_API tls_status tls_chernov_prob(const tls_chain* chain, double t, double* out);
TLS_API tls_status tls_format_results(const tls_result* results, size_t n, tls_format format,
                                      char** out);

TLS_API tls_status tls_sweep(const tls_chain* chain, double rho_min, double rho_max, int points,
                             int log_scale, const tls_method* methods, size_t n_methods,
                             const tls_options* options, tls_curve** out);
TLS_API void tls_curve_destroy(tls_curve* curve);
TLS_API size_t tls_curve_size(const tls_curve* curve);
TLS_API tls_status tls_curve_point(const tls_curve* curve, size_t index, double* rho,
                                   tls_method* method, double* t);
TLS_API tls_status tls_format_curve(const tls_curve* curve, tls_format format, char** out);

TLS_API tls_status tls_mc_quantile(const tls_chain* chain, double rho, const tls_mc_config* cfg,
                                   double* t_hat, double* std_error);
TLS_API tls_status tls_mc_prob(const tls_chain* chain, double t, const tls_mc_config* cfg,
                               double* p_hat, double* std_error);

TLS_API void tls_study_spec_init(tls_study_spec* spec);
TLS_API tls_status tls_study_run(const tls_study_spec* spec, tls_study** out);
TLS_API void tls_study_destroy(tls_study* study);
TLS_API size_t tls_study_size(const tls_study* study);
/* Row scalars; per-method values through tls_study_value. */
TLS_API tls_status tls_study_row(const tls_study* study, size_t index, int* chain_id, double* s1,
                                 double* d_factor, double* mc_t);
TLS_API tls_status tls_study_value(const tls_study* study, size_t index, tls_method method,
                                   double* t, double* f);
TLS_API tls_status tls_format_study(const tls_study* study, tls_format format, char** out);

#ifdef __cplusplus
}
#endif

#endif /* TOLSTACK_H */
