#ifndef PHISTAT_H
#define PHISTAT_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(PHISTAT_BUILDING_LIBRARY)
#    define PHISTAT_API __declspec(dllexport)
#  else
#    define PHISTAT_API __declspec(dllimport)
#  endif
#else
#  define PHISTAT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Every fallible call returns a status; on failure a description is
   available from phistat_last_error() on the same thread until the next call. */
typedef enum phistat_status {
    PHISTAT_OK = 0,
    PHISTAT_DOMAIN_ERROR,
    PHISTAT_RANGE_ERROR,
    PHISTAT_QUADRATURE_ERROR,
    PHISTAT_CONVERGENCE_ERROR,
    PHISTAT_INVALID_SIMPLEX_POINT,
    PHISTAT_DIMENSION_MISMATCH,
    PHISTAT_INFEASIBLE_CONSTRAINT,
    PHISTAT_DIVERGENT_INTEGRAL,
    PHISTAT_NO_POSITIVE_ROOT,
    PHISTAT_VERIFICATION_FAILURE,
    PHISTAT_UNSUPPORTED_OUTCOME,
    PHISTAT_INVALID_ARGUMENT,
    PHISTAT_NULL_ARGUMENT,
    PHISTAT_BUFFER_TOO_SMALL,
    PHISTAT_OUT_OF_MEMORY,
    PHISTAT_INTERNAL_ERROR
} phistat_status;

PHISTAT_API const char* phistat_version(void);
PHISTAT_API const char* phistat_status_name(phistat_status status);
PHISTAT_API const char* phistat_last_error(void);

/* Strings returned through char** are owned by the caller. */
PHISTAT_API void phistat_string_free(char* s);

/* ---- configuration; NULL wherever a config is accepted means defaults ---- */

typedef struct phistat_config phistat_config;

PHISTAT_API phistat_status phistat_config_create(double abs_tol, double rel_tol, size_t max_subdivisions,
                                                 double root_tol, size_t max_root_iters, phistat_config** out);
PHISTAT_API phistat_status phistat_config_default(phistat_config** out);
/* Copy of base (or the defaults) with new integration tolerances. */
PHISTAT_API phistat_status phistat_config_with_tolerances(const phistat_config* base, double abs_tol, double rel_tol,
                                                          phistat_config** out);
PHISTAT_API void phistat_config_destroy(phistat_config* cfg);

/* ---- deformation functions ---- */

typedef enum phistat_phi_kind {
    PHISTAT_PHI_IDENTITY = 0,
    PHISTAT_PHI_EPSILON,
    PHISTAT_PHI_HALDANE,
    PHISTAT_PHI_SERIES
} phistat_phi_kind;

typedef enum phistat_phi_op {
    PHISTAT_PHI_EVAL = 0,   /* phi(u) */
    PHISTAT_PHI_LN,         /* int_1^u dv / phi(v) */
    PHISTAT_PHI_EXP,        /* inverse of PHISTAT_PHI_LN */
    PHISTAT_PHI_PSI,        /* phi(exp_phi(x)); 0 below and +inf above the log range */
    PHISTAT_PHI_CHI,        /* 1 / int_0^{1/u} v / phi(v) dv */
    PHISTAT_PHI_DEDUCED_LOG,
    PHISTAT_PHI_LN_CHI,
    PHISTAT_PHI_MOD_LN,
    PHISTAT_PHI_MOD_EXP
} phistat_phi_op;

typedef struct phistat_phi phistat_phi;

/* parameter is eps or g; coefficients are read only for PHISTAT_PHI_SERIES. */
PHISTAT_API phistat_status phistat_phi_create(phistat_phi_kind kind, double parameter, const double* coefficients,
                                              size_t n_coefficients, phistat_phi** out);
PHISTAT_API void phistat_phi_destroy(phistat_phi* phi);
PHISTAT_API phistat_status phistat_phi_upper_bound(const phistat_phi* phi, double* out);
PHISTAT_API phistat_status phistat_phi_apply(const phistat_phi* phi, phistat_phi_op op, double x,
                                             const phistat_config* cfg, double* out);
/* modified == 0: sum p_i omega(1/p_i); otherwise the modified entropy. */
PHISTAT_API phistat_status phistat_phi_entropy(const phistat_phi* phi, const double* p, size_t n, int modified,
                                               const phistat_config* cfg, double* out);

/* ---- entropy families ---- */

typedef enum phistat_family_kind {
    PHISTAT_FAMILY_BGS = 0,
    PHISTAT_FAMILY_EPSILON,
    PHISTAT_FAMILY_HALDANE
} phistat_family_kind;

typedef struct phistat_family {
    phistat_family_kind kind;
    double parameter; /* eps in [-1, 1] or g in [0, 1]; ignored for BGS */
} phistat_family;

PHISTAT_API phistat_status phistat_family_check(phistat_family family);
PHISTAT_API phistat_status phistat_entropy_value(phistat_family family, const double* p, size_t n, double* out);
/* out receives n values. */
PHISTAT_API phistat_status phistat_entropy_gradient(phistat_family family, const double* p, size_t n, double* out);
PHISTAT_API phistat_status phistat_entropy_hessian(phistat_family family, const double* p, size_t n, double* out);

/* Occupation weight at eta = a + b E. */
PHISTAT_API phistat_status phistat_weight(phistat_family family, double eta, const phistat_config* cfg, double* out);
PHISTAT_API phistat_status phistat_wu_omega(double g, double eta, const phistat_config* cfg, double* out);
PHISTAT_API phistat_status phistat_wu_weight(double g, double eta, const phistat_config* cfg, double* out);

/* ---- maximum entropy ---- */

typedef struct phistat_problem phistat_problem;
typedef struct phistat_solution phistat_solution;

typedef enum phistat_solver {
    PHISTAT_SOLVER_CLOSED_FORM = 0,
    PHISTAT_SOLVER_NUMERIC
} phistat_solver;

PHISTAT_API phistat_status phistat_problem_create(const double* energies, size_t n, double mean_energy,
                                                  phistat_family family, phistat_problem** out);
/* {"energies": [...], "mean_energy": x} */
PHISTAT_API phistat_status phistat_problem_from_json(const char* json, phistat_family family, phistat_problem** out);
PHISTAT_API void phistat_problem_destroy(phistat_problem* problem);
PHISTAT_API size_t phistat_problem_size(const phistat_problem* problem);

PHISTAT_API phistat_status phistat_solve(const phistat_problem* problem, phistat_solver solver,
                                         const phistat_config* cfg, phistat_solution** out);
PHISTAT_API void phistat_solution_destroy(phistat_solution* solution);
PHISTAT_API size_t phistat_solution_size(const phistat_solution* solution);
PHISTAT_API phistat_status phistat_solution_occupations(const phistat_solution* solution, double* out, size_t capacity);
PHISTAT_API phistat_status phistat_solution_multipliers(const phistat_solution* solution, double* a, double* b);
PHISTAT_API phistat_status phistat_solution_summary(const phistat_solution* solution, double* entropy,
                                                    double* residual, size_t* iterations);
PHISTAT_API phistat_status phistat_solution_to_json(const phistat_solution* solution, char** out);

typedef struct phistat_maximum_report {
    double stationarity_residual;
    double constraint_residual;
    int hessian_negative;
    size_t directions_tested;
    size_t perturbation_violations;
    double smallest_drop;
    int passed;
} phistat_maximum_report;

/* Fills the report either way; returns PHISTAT_VERIFICATION_FAILURE when a
   check failed, with the failed check in phistat_last_error(). */
PHISTAT_API phistat_status phistat_verify_maximum(const phistat_solution* solution, const phistat_problem* problem,
                                                  uint64_t seed, size_t directions, phistat_maximum_report* out);

/* ---- occupation models ---- */

typedef enum phistat_model_kind {
    PHISTAT_MODEL_CATEGORICAL = 0,
    PHISTAT_MODEL_BERNOULLI,
    PHISTAT_MODEL_GEOMETRIC,
    PHISTAT_MODEL_CURVED_BERNOULLI,
    PHISTAT_MODEL_CURVED_GEOMETRIC
} phistat_model_kind;

typedef struct phistat_model phistat_model;

typedef struct phistat_sample_stats {
    uint64_t count;
    double mean;
    double variance;
    uint64_t seed;
} phistat_sample_stats;

/* "categorical", "bernoulli", "geometric", "curved-bernoulli", "curved-geometric" */
PHISTAT_API phistat_status phistat_model_kind_from_name(const char* name, phistat_model_kind* out);
/* Scalar families; eps is read only by the curved ones. */
PHISTAT_API phistat_status phistat_model_create(phistat_model_kind kind, double p, double eps, phistat_model** out);
PHISTAT_API phistat_status phistat_model_create_categorical(const double* probabilities, const double* levels, size_t n,
                                                            phistat_model** out);
PHISTAT_API void phistat_model_destroy(phistat_model* model);
PHISTAT_API phistat_status phistat_model_log_mass(const phistat_model* model, double x, double* out);
/* One value, or one per level for categorical models. */
PHISTAT_API phistat_status phistat_model_natural_parameter(const phistat_model* model, double* out, size_t capacity,
                                                           size_t* written);
PHISTAT_API phistat_status phistat_natural_parameter_inverse(phistat_model_kind kind, int has_eps, double eps,
                                                             double eta, double* out);
PHISTAT_API phistat_status phistat_model_moments(const phistat_model* model, double* mean, double* variance);
PHISTAT_API phistat_status phistat_model_normalization(const phistat_model* model, double tail_tol, double* out);
PHISTAT_API phistat_status phistat_model_sample(const phistat_model* model, uint64_t n, uint64_t seed,
                                                phistat_sample_stats* out);

/* ---- self check ---- */

/* JSON {"passed": bool, "checks": [{"name", "measured", "tolerance", "passed"}...]} */
PHISTAT_API phistat_status phistat_self_check(const phistat_config* cfg, uint64_t seed, char** report_json,
                                              int* passed);

#ifdef __cplusplus
}
#endif

#endif
