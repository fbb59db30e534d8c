#ifndef YMA_CAPI_H
#define YMA_CAPI_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define YMA_API __declspec(dllexport)
#else
#define YMA_API __attribute__((visibility("default")))
#endif

typedef enum yma_status {
    YMA_OK = 0,
    YMA_ERR_ARGUMENT = 1,    /* null pointer, bad size, parameter out of range */
    YMA_ERR_QUADRATURE = 2,  /* quadrature residual above the requested bound */
    YMA_ERR_CONVERGENCE = 3, /* flow, Coulomb or CG iteration did not converge */
    YMA_ERR_IO = 4,
    YMA_ERR_CONFIG = 5,
    YMA_ERR_INTERNAL = 6
} yma_status;

/* Opaque connection handle. */
typedef struct yma_model yma_model;

YMA_API const char* yma_version(void);
/* Message of the last failed call on this thread, "" after a success. */
YMA_API const char* yma_last_error(void);
YMA_API const char* yma_status_name(yma_status s);

/* Strings returned through char** are owned by the caller. */
YMA_API void yma_string_free(char* s);

YMA_API yma_status yma_model_basic(yma_model** out);
/* xi may be NULL for the origin. */
YMA_API yma_status yma_model_adhm(const double xi[4], double lambda, yma_model** out);
/* Radial perturbation of the basic connection, profile on `nodes` Gauss-Legendre nodes. */
YMA_API yma_status yma_model_radial_perturbation(int nodes, double eps, uint64_t seed, yma_model** out);
/* Gauge decoration of `base` by a bump exp(amp * rho-profile) centred at the origin. */
YMA_API yma_status yma_model_gauge_bump(const yma_model* base, double rho, const double amp[3], yma_model** out);
YMA_API void yma_model_free(yma_model* m);
/* Short kind string ("adhm", "radial", ...), owned by the handle. */
YMA_API const char* yma_model_kind(const yma_model* m);

/* YM_{alpha,lambda}; lambda = 1 gives YM_alpha. rel_tol <= 0 uses the default. */
YMA_API yma_status yma_energy(const yma_model* m, double alpha, double lambda, double rel_tol, double* value,
                              double* residual);
YMA_API yma_status yma_energy_json(const yma_model* m, double alpha, double lambda, double rel_tol, char** json);
YMA_API yma_status yma_charge(const yma_model* m, double rel_tol, double* value, double* residual);

/* Dilation profile CSV: alpha,lambda,tau,sigma,G,Gprime,gap,dE_dloglog,residual, one row per lambda. */
YMA_API yma_status yma_profile_csv(double alpha, const double* lambdas, size_t n, char** csv);

/* Alpha-flow from a seeded radial perturbation; trajectory CSV. */
YMA_API yma_status yma_flow_csv(double alpha, double eps, uint64_t seed, int nodes, int log_every, char** csv,
                                int* converged);

/* Coulomb projection on the chart ball of radius R with n nodes per axis; run log CSV. */
YMA_API yma_status yma_gaugefix_csv(const yma_model* m, double R, int n, double tol, char** csv, double* residual);

/* Acceptance suite. config_path may be NULL for defaults; overrides are "key=value".
   on_line receives one line per criterion. *all_pass is 1 iff every check passed. */
typedef void (*yma_line_callback)(const char* line, void* user);
YMA_API yma_status yma_verify(const char* config_path, const char* const* overrides, size_t n_overrides,
                              const char* report_path, yma_line_callback on_line, void* user, int* all_pass);

#ifdef __cplusplus
}
#endif

#endif
