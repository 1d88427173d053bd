#include "phistat/phistat.h"

#include "phistat/entropy.hpp"
#include "phistat/error.hpp"
#include "phistat/expfam.hpp"
#include "phistat/maxent.hpp"
#include "phistat/phi.hpp"
#include "phistat/selfcheck.hpp"
#include "phistat/wu.hpp"

#include <cstring>
#include <new>
#include <optional>
#include <span>
#include <string>
#include <vector>

struct phistat_config {
    phistat::QuadratureConfig cfg;
};

struct phistat_phi {
    phistat::PhiFunction phi;
};

struct phistat_problem {
    phistat::MaxEntProblem problem;
};

struct phistat_solution {
    phistat::MaxEntSolution solution;
};

struct phistat_model {
    phistat::OccupationModel model;
};

namespace {

thread_local std::string last_error;

phistat_status from_code(phistat::ErrorCode code) {
    using phistat::ErrorCode;
    switch (code) {
    case ErrorCode::DomainError: return PHISTAT_DOMAIN_ERROR;
    case ErrorCode::RangeError: return PHISTAT_RANGE_ERROR;
    case ErrorCode::QuadratureError: return PHISTAT_QUADRATURE_ERROR;
    case ErrorCode::ConvergenceError: return PHISTAT_CONVERGENCE_ERROR;
    case ErrorCode::InvalidSimplexPoint: return PHISTAT_INVALID_SIMPLEX_POINT;
    case ErrorCode::DimensionMismatch: return PHISTAT_DIMENSION_MISMATCH;
    case ErrorCode::InfeasibleConstraint: return PHISTAT_INFEASIBLE_CONSTRAINT;
    case ErrorCode::DivergentIntegral: return PHISTAT_DIVERGENT_INTEGRAL;
    case ErrorCode::NoPositiveRoot: return PHISTAT_NO_POSITIVE_ROOT;
    case ErrorCode::VerificationFailure: return PHISTAT_VERIFICATION_FAILURE;
    case ErrorCode::UnsupportedOutcome: return PHISTAT_UNSUPPORTED_OUTCOME;
    case ErrorCode::InvalidArgument: return PHISTAT_INVALID_ARGUMENT;
    }
    return PHISTAT_INTERNAL_ERROR;
}

phistat_status report(phistat_status status, const char* message) {
    last_error = message;
    return status;
}

template <class F>
phistat_status guarded(F&& body) {
    last_error.clear();
    try {
        return body();
    } catch (const phistat::Error& e) {
        return report(from_code(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return report(PHISTAT_OUT_OF_MEMORY, "out of memory");
    } catch (const std::exception& e) {
        return report(PHISTAT_INTERNAL_ERROR, e.what());
    } catch (...) {
        return report(PHISTAT_INTERNAL_ERROR, "unknown exception");
    }
}

#define PHISTAT_REQUIRE(ptr)                                                    \
    do {                                                                        \
        if ((ptr) == nullptr) return report(PHISTAT_NULL_ARGUMENT, #ptr " is null"); \
    } while (0)

const phistat::QuadratureConfig& config_or_default(const phistat_config* cfg) {
    static const phistat::QuadratureConfig defaults{};
    return cfg ? cfg->cfg : defaults;
}

std::span<const double> view(const double* p, size_t n) { return {p, n}; }

phistat::EntropyFamily to_family(phistat_family f) {
    switch (f.kind) {
    case PHISTAT_FAMILY_BGS: return phistat::EntropyFamily::bgs();
    case PHISTAT_FAMILY_EPSILON: return phistat::EntropyFamily::epsilon(f.parameter);
    case PHISTAT_FAMILY_HALDANE: return phistat::EntropyFamily::haldane(f.parameter);
    }
    phistat::fail(phistat::ErrorCode::InvalidArgument, "unknown entropy family");
}

phistat::ModelKind to_model_kind(phistat_model_kind k) {
    switch (k) {
    case PHISTAT_MODEL_CATEGORICAL: return phistat::ModelKind::Categorical;
    case PHISTAT_MODEL_BERNOULLI: return phistat::ModelKind::Bernoulli;
    case PHISTAT_MODEL_GEOMETRIC: return phistat::ModelKind::Geometric;
    case PHISTAT_MODEL_CURVED_BERNOULLI: return phistat::ModelKind::CurvedBernoulli;
    case PHISTAT_MODEL_CURVED_GEOMETRIC: return phistat::ModelKind::CurvedGeometric;
    }
    phistat::fail(phistat::ErrorCode::InvalidArgument, "unknown model kind");
}

char* duplicate(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

} // namespace

extern "C" {

const char* phistat_version(void) { return "0.1.0"; }

const char* phistat_status_name(phistat_status status) {
    switch (status) {
    case PHISTAT_OK: return "Ok";
    case PHISTAT_DOMAIN_ERROR: return "DomainError";
    case PHISTAT_RANGE_ERROR: return "RangeError";
    case PHISTAT_QUADRATURE_ERROR: return "QuadratureError";
    case PHISTAT_CONVERGENCE_ERROR: return "ConvergenceError";
    case PHISTAT_INVALID_SIMPLEX_POINT: return "InvalidSimplexPoint";
    case PHISTAT_DIMENSION_MISMATCH: return "DimensionMismatch";
    case PHISTAT_INFEASIBLE_CONSTRAINT: return "InfeasibleConstraint";
    case PHISTAT_DIVERGENT_INTEGRAL: return "DivergentIntegral";
    case PHISTAT_NO_POSITIVE_ROOT: return "NoPositiveRoot";
    case PHISTAT_VERIFICATION_FAILURE: return "VerificationFailure";
    case PHISTAT_UNSUPPORTED_OUTCOME: return "UnsupportedOutcome";
    case PHISTAT_INVALID_ARGUMENT: return "InvalidArgument";
    case PHISTAT_NULL_ARGUMENT: return "NullArgument";
    case PHISTAT_BUFFER_TOO_SMALL: return "BufferTooSmall";
    case PHISTAT_OUT_OF_MEMORY: return "OutOfMemory";
    case PHISTAT_INTERNAL_ERROR: return "InternalError";
    }
    return "Unknown";
}

const char* phistat_last_error(void) { return last_error.c_str(); }

void phistat_string_free(char* s) { delete[] s; }

/* configuration */

phistat_status phistat_config_create(double abs_tol, double rel_tol, size_t max_subdivisions, double root_tol,
                                     size_t max_root_iters, phistat_config** out) {
    return guarded([&] {
        PHISTAT_REQUIRE(out);
        *out = new phistat_config{{abs_tol, rel_tol, max_subdivisions, root_tol, max_root_iters}};
        return PHISTAT_OK;
    });
}

phistat_status phistat_config_default(phistat_config** out) {
    return guarded([&] {
        PHISTAT_REQUIRE(out);
        *out = new phistat_config{};
        return PHISTAT_OK;
    });
}

phistat_status phistat_config_with_tolerances(const phistat_config* base, double abs_tol, double rel_tol,
                                              phistat_config** out) {
    return guarded([&] {
        PHISTAT_REQUIRE(out);
        *out = new phistat_config{config_or_default(base).with_integration_tolerances(abs_tol, rel_tol)};
        return PHISTAT_OK;
    });
}

void phistat_config_destroy(phistat_config* cfg) { delete cfg; }

/* deformation functions */

phistat_status phistat_phi_create(phistat_phi_kind kind, double parameter, const double* coefficients,
                                  size_t n_coefficients, phistat_phi** out) {
    return guarded([&] {
        PHISTAT_REQUIRE(out);
        switch (kind) {
        case PHISTAT_PHI_IDENTITY: *out = new phistat_phi{phistat::PhiFunction::identity()}; break;
        case PHISTAT_PHI_EPSILON: *out = new phistat_phi{phistat::PhiFunction::epsilon(parameter)}; break;
        case PHISTAT_PHI_HALDANE: *out = new phistat_phi{phistat::PhiFunction::haldane(parameter)}; break;
        case PHISTAT_PHI_SERIES:
            if (n_coefficients > 0) PHISTAT_REQUIRE(coefficients);
            *out = new phistat_phi{
                phistat::PhiFunction::series(std::vector<double>(coefficients, coefficients + n_coefficients))};
            break;
        default: return report(PHISTAT_INVALID_ARGUMENT, "unknown deformation kind");
        }
        return PHISTAT_OK;
    });
}

void phistat_phi_destroy(phistat_phi* phi) { delete phi; }

phistat_status phistat_phi_upper_bound(const phistat_phi* phi, double* out) {
    return guarded([&] {
        PHISTAT_REQUIRE(phi);
        PHISTAT_REQUIRE(out);
        *out = phi->phi.upper_bound();
        return PHISTAT_OK;
    });
}

phistat_status phistat_phi_apply(const phistat_phi* phi, phistat_phi_op op, double x, const phistat_config* cfg,
                                 double* out) {
    return guarded([&] {
        PHISTAT_REQUIRE(phi);
        PHISTAT_REQUIRE(out);
        const auto& f = phi->phi;
        const auto& c = config_or_default(cfg);
        switch (op) {
        case PHISTAT_PHI_EVAL: *out = phistat::phi_eval(f, x); break;
        case PHISTAT_PHI_LN: *out = phistat::ln_phi(f, x, c); break;
        case PHISTAT_PHI_EXP: *out = phistat::exp_phi(f, x, c); break;
        case PHISTAT_PHI_PSI: *out = phistat::psi_eval(f, x, c); break;
        case PHISTAT_PHI_CHI: *out = phistat::chi_eval(f, x, c); break;
        case PHISTAT_PHI_DEDUCED_LOG: *out = phistat::deduced_log(f, x, c); break;
        case PHISTAT_PHI_LN_CHI: *out = phistat::ln_chi(f, x, c); break;
        case PHISTAT_PHI_MOD_LN: *out = phistat::mod_ln_phi(f, x); break;
        case PHISTAT_PHI_MOD_EXP: *out = phistat::mod_exp_phi(f, x, c); break;
        default: return report(PHISTAT_INVALID_ARGUMENT, "unknown deformation operation");
        }
        return PHISTAT_OK;
    });
}

phistat_status phistat_phi_entropy(const phistat_phi* phi, const double* p, size_t n, int modified,
                                   const phistat_config* cfg, double* out) {
    return guarded([&] {
        PHISTAT_REQUIRE(phi);
        PHISTAT_REQUIRE(p);
        PHISTAT_REQUIRE(out);
        const auto& c = config_or_default(cfg);
        *out = modified ? phistat::modified_phi_entropy(phi->phi, view(p, n), c) : phistat::phi_entropy(phi->phi, view(p, n), c);
        return PHISTAT_OK;
    });
}

/* entropy families */

phistat_status phistat_family_check(phistat_family family) {
    return guarded([&] {
        (void)to_family(family);
        return PHISTAT_OK;
    });
}

phistat_status phistat_entropy_value(phistat_family family, const double* p, size_t n, double* out) {
    return guarded([&] {
        PHISTAT_REQUIRE(p);
        PHISTAT_REQUIRE(out);
        *out = phistat::entropy_value(to_family(family), view(p, n));
        return PHISTAT_OK;
    });
}

phistat_status phistat_entropy_gradient(phistat_family family, const double* p, size_t n, double* out) {
    return guarded([&] {
        PHISTAT_REQUIRE(p);
        PHISTAT_REQUIRE(out);
        const auto g = phistat::entropy_gradient(to_family(family), view(p, n));
        std::copy(g.begin(), g.end(), out);
        return PHISTAT_OK;
    });
}

phistat_status phistat_entropy_hessian(phistat_family family, const double* p, size_t n, double* out) {
    return guarded([&] {
        PHISTAT_REQUIRE(p);
        PHISTAT_REQUIRE(out);
        const auto h = phistat::entropy_hessian(to_family(family), view(p, n));
        std::copy(h.begin(), h.end(), out);
        return PHISTAT_OK;
    });
}

phistat_status phistat_weight(phistat_family family, double eta, const phistat_config* cfg, double* out) {
    return guarded([&] {
        PHISTAT_REQUIRE(out);
        *out = phistat::weight_at(to_family(family), eta, config_or_default(cfg));
        return PHISTAT_OK;
    });
}

phistat_status phistat_wu_omega(double g, double eta, const phistat_config* cfg, double* out) {
    return guarded([&] {
        PHISTAT_REQUIRE(out);
        *out = phistat::wu_omega({g, eta}, config_or_default(cfg));
        return PHISTAT_OK;
    });
}

phistat_status phistat_wu_weight(double g, double eta, const phistat_config* cfg, double* out) {
    return guarded([&] {
        PHISTAT_REQUIRE(out);
        *out = phistat::wu_weight({g, eta}, config_or_default(cfg));
        return PHISTAT_OK;
    });
}

/* maximum entropy */

phistat_status phistat_problem_create(const double* energies, size_t n, double mean_energy, phistat_family family,
                                      phistat_problem** out) {
    return guarded([&] {
        PHISTAT_REQUIRE(energies);
        PHISTAT_REQUIRE(out);
        auto spectrum = phistat::EnergySpectrum::create(std::vector<double>(energies, energies + n));
        *out = new phistat_problem{{{std::move(spectrum), mean_energy}, to_family(family)}};
        return PHISTAT_OK;
    });
}

phistat_status phistat_problem_from_json(const char* json, phistat_family family, phistat_problem** out) {
    return guarded([&] {
        PHISTAT_REQUIRE(json);
        PHISTAT_REQUIRE(out);
        *out = new phistat_problem{{phistat::constraint_from_json(json), to_family(family)}};
        return PHISTAT_OK;
    });
}

void phistat_problem_destroy(phistat_problem* problem) { delete problem; }

size_t phistat_problem_size(const phistat_problem* problem) {
    return problem ? problem->problem.constraint.spectrum.size() : 0;
}

phistat_status phistat_solve(const phistat_problem* problem, phistat_solver solver, const phistat_config* cfg,
                             phistat_solution** out) {
    return guarded([&] {
        PHISTAT_REQUIRE(problem);
        PHISTAT_REQUIRE(out);
        switch (solver) {
        case PHISTAT_SOLVER_CLOSED_FORM:
            *out = new phistat_solution{phistat::solve_closed_form(problem->problem, config_or_default(cfg))};
            break;
        case PHISTAT_SOLVER_NUMERIC: *out = new phistat_solution{phistat::solve_numeric(problem->problem)}; break;
        default: return report(PHISTAT_INVALID_ARGUMENT, "unknown solver");
        }
        return PHISTAT_OK;
    });
}

void phistat_solution_destroy(phistat_solution* solution) { delete solution; }

size_t phistat_solution_size(const phistat_solution* solution) { return solution ? solution->solution.p.size() : 0; }

phistat_status phistat_solution_occupations(const phistat_solution* solution, double* out, size_t capacity) {
    return guarded([&] {
        PHISTAT_REQUIRE(solution);
        PHISTAT_REQUIRE(out);
        const auto p = solution->solution.p.values();
        if (capacity < p.size()) return report(PHISTAT_BUFFER_TOO_SMALL, "occupation buffer is too small");
        std::copy(p.begin(), p.end(), out);
        return PHISTAT_OK;
    });
}

phistat_status phistat_solution_multipliers(const phistat_solution* solution, double* a, double* b) {
    return guarded([&] {
        PHISTAT_REQUIRE(solution);
        if (a) *a = solution->solution.a;
        if (b) *b = solution->solution.b;
        return PHISTAT_OK;
    });
}

phistat_status phistat_solution_summary(const phistat_solution* solution, double* entropy, double* residual,
                                        size_t* iterations) {
    return guarded([&] {
        PHISTAT_REQUIRE(solution);
        if (entropy) *entropy = solution->solution.entropy;
        if (residual) *residual = solution->solution.residual;
        if (iterations) *iterations = solution->solution.iterations;
        return PHISTAT_OK;
    });
}

phistat_status phistat_solution_to_json(const phistat_solution* solution, char** out) {
    return guarded([&] {
        PHISTAT_REQUIRE(solution);
        PHISTAT_REQUIRE(out);
        *out = duplicate(phistat::solution_to_json(solution->solution));
        return PHISTAT_OK;
    });
}

phistat_status phistat_verify_maximum(const phistat_solution* solution, const phistat_problem* problem, uint64_t seed,
                                      size_t directions, phistat_maximum_report* out) {
    return guarded([&] {
        PHISTAT_REQUIRE(solution);
        PHISTAT_REQUIRE(problem);
        PHISTAT_REQUIRE(out);
        const auto r = phistat::inspect_maximum(solution->solution, problem->problem, seed, directions);
        out->stationarity_residual = r.stationarity_residual;
        out->constraint_residual = r.constraint_residual;
        out->hessian_negative = r.hessian_negative ? 1 : 0;
        out->directions_tested = r.directions_tested;
        out->perturbation_violations = r.perturbation_violations;
        out->smallest_drop = r.smallest_drop;
        out->passed = r.passed() ? 1 : 0;
        if (!r.passed()) return report(PHISTAT_VERIFICATION_FAILURE, r.first_failure.c_str());
        return PHISTAT_OK;
    });
}

/* occupation models */

phistat_status phistat_model_kind_from_name(const char* name, phistat_model_kind* out) {
    return guarded([&] {
        PHISTAT_REQUIRE(name);
        PHISTAT_REQUIRE(out);
        const auto kind = phistat::parse_model_kind(name);
        if (!kind) return report(PHISTAT_INVALID_ARGUMENT, (std::string("unknown model: ") + name).c_str());
        switch (*kind) {
        case phistat::ModelKind::Categorical: *out = PHISTAT_MODEL_CATEGORICAL; break;
        case phistat::ModelKind::Bernoulli: *out = PHISTAT_MODEL_BERNOULLI; break;
        case phistat::ModelKind::Geometric: *out = PHISTAT_MODEL_GEOMETRIC; break;
        case phistat::ModelKind::CurvedBernoulli: *out = PHISTAT_MODEL_CURVED_BERNOULLI; break;
        case phistat::ModelKind::CurvedGeometric: *out = PHISTAT_MODEL_CURVED_GEOMETRIC; break;
        }
        return PHISTAT_OK;
    });
}

phistat_status phistat_model_create(phistat_model_kind kind, double p, double eps, phistat_model** out) {
    return guarded([&] {
        PHISTAT_REQUIRE(out);
        using phistat::OccupationModel;
        switch (kind) {
        case PHISTAT_MODEL_BERNOULLI: *out = new phistat_model{OccupationModel::bernoulli(p)}; break;
        case PHISTAT_MODEL_GEOMETRIC: *out = new phistat_model{OccupationModel::geometric(p)}; break;
        case PHISTAT_MODEL_CURVED_BERNOULLI: *out = new phistat_model{OccupationModel::curved_bernoulli(p, eps)}; break;
        case PHISTAT_MODEL_CURVED_GEOMETRIC: *out = new phistat_model{OccupationModel::curved_geometric(p, eps)}; break;
        case PHISTAT_MODEL_CATEGORICAL:
            return report(PHISTAT_INVALID_ARGUMENT, "categorical models need phistat_model_create_categorical");
        default: return report(PHISTAT_INVALID_ARGUMENT, "unknown model kind");
        }
        return PHISTAT_OK;
    });
}

phistat_status phistat_model_create_categorical(const double* probabilities, const double* levels, size_t n,
                                                phistat_model** out) {
    return guarded([&] {
        PHISTAT_REQUIRE(probabilities);
        PHISTAT_REQUIRE(levels);
        PHISTAT_REQUIRE(out);
        auto p = phistat::validate(view(probabilities, n));
        auto e = phistat::EnergySpectrum::create(std::vector<double>(levels, levels + n));
        *out = new phistat_model{phistat::OccupationModel::categorical(std::move(p), std::move(e))};
        return PHISTAT_OK;
    });
}

void phistat_model_destroy(phistat_model* model) { delete model; }

phistat_status phistat_model_log_mass(const phistat_model* model, double x, double* out) {
    return guarded([&] {
        PHISTAT_REQUIRE(model);
        PHISTAT_REQUIRE(out);
        *out = phistat::log_mass(model->model, x);
        return PHISTAT_OK;
    });
}

phistat_status phistat_model_natural_parameter(const phistat_model* model, double* out, size_t capacity,
                                               size_t* written) {
    return guarded([&] {
        PHISTAT_REQUIRE(model);
        PHISTAT_REQUIRE(out);
        const auto eta = phistat::natural_parameter(model->model);
        if (written) *written = eta.size();
        if (capacity < eta.size()) return report(PHISTAT_BUFFER_TOO_SMALL, "natural parameter buffer is too small");
        std::copy(eta.begin(), eta.end(), out);
        return PHISTAT_OK;
    });
}

phistat_status phistat_natural_parameter_inverse(phistat_model_kind kind, int has_eps, double eps, double eta,
                                                 double* out) {
    return guarded([&] {
        PHISTAT_REQUIRE(out);
        *out = phistat::natural_parameter_inverse(to_model_kind(kind), has_eps ? std::optional<double>(eps) : std::nullopt,
                                                  eta);
        return PHISTAT_OK;
    });
}

phistat_status phistat_model_moments(const phistat_model* model, double* mean, double* variance) {
    return guarded([&] {
        PHISTAT_REQUIRE(model);
        if (mean) *mean = phistat::exact_mean(model->model);
        if (variance) *variance = phistat::exact_variance(model->model);
        return PHISTAT_OK;
    });
}

phistat_status phistat_model_normalization(const phistat_model* model, double tail_tol, double* out) {
    return guarded([&] {
        PHISTAT_REQUIRE(model);
        PHISTAT_REQUIRE(out);
        *out = phistat::normalization_check(model->model, tail_tol);
        return PHISTAT_OK;
    });
}

phistat_status phistat_model_sample(const phistat_model* model, uint64_t n, uint64_t seed, phistat_sample_stats* out) {
    return guarded([&] {
        PHISTAT_REQUIRE(model);
        PHISTAT_REQUIRE(out);
        const auto s = phistat::sample(model->model, static_cast<std::size_t>(n), seed);
        *out = {static_cast<uint64_t>(s.count), s.mean, s.variance, s.seed};
        return PHISTAT_OK;
    });
}

/* self check */

phistat_status phistat_self_check(const phistat_config* cfg, uint64_t seed, char** report_json, int* passed) {
    return guarded([&] {
        PHISTAT_REQUIRE(report_json);
        const auto r = phistat::run_self_check(config_or_default(cfg), seed);
        *report_json = duplicate(phistat::self_check_to_json(r));
        if (passed) *passed = r.passed() ? 1 : 0;
        return PHISTAT_OK;
    });
}

} // extern "C"
