#pragma once

#include "phistat/entropy.hpp"
#include "phistat/numerics.hpp"
#include "phistat/simplex.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace phistat {

struct MaxEntProblem {
    MomentConstraint constraint;
    EntropyFamily family;
};

// Occupations p_i = w(a + b E_i) together with their multipliers.
struct MaxEntSolution {
    SimplexPoint p;
    double a = 0.0;
    double b = 0.0;
    double entropy = 0.0;
    double residual = 0.0;  // max of the constraint and stationarity residuals
    std::size_t iterations = 0;
};

inline constexpr double constraint_tolerance = 1e-10;
inline constexpr double stationarity_tolerance = 1e-8;

/// Occupation weight at natural argument eta = a + b E:
///   Epsilon(e): 1 / (e^eta - e), BGS: e^-eta (the e = 0 weight), Haldane(g): Wu weight.
/// DomainError where the weight is undefined (e^eta <= e, or g = 0 with eta <= 0).
double weight_function(const EntropyFamily& family, double a, double b, double energy,
                       const QuadratureConfig& cfg = {});
double weight_at(const EntropyFamily& family, double eta, const QuadratureConfig& cfg = {});

/// Gradient used in the stationarity condition grad_i = a + b E_i. Equals
/// entropy_gradient except for BGS, whose -ln p - 1 is shifted to -ln p so
/// that BGS multipliers coincide with those of Epsilon(0).
std::vector<double> stationarity_gradient(const EntropyFamily& family, std::span<const double> p);

struct Residuals {
    double normalization = 0.0;  // |sum p - 1|
    double mean_energy = 0.0;    // |sum p E - E|
    double stationarity = 0.0;   // max_i |grad_i - a - b E_i|
};
Residuals residuals(const MaxEntProblem& prob, std::span<const double> p, double a, double b);

/// Multipliers from the closed-form weights: a from normalization at fixed b
/// (sum of weights is strictly decreasing in a), b from the mean energy by
/// bracketed Newton; the bracket for b grows geometrically from +-1/(E_n - E_1).
MaxEntSolution solve_closed_form(const MaxEntProblem& prob, const QuadratureConfig& cfg = {});

/// Damped Newton on the full Lagrange system (grad_i - a - b E_i = 0, plus
/// both constraints), started from feasible_point. Steps are halved up to 60
/// times until the iterate stays in the entropy domain and the residual norm
/// drops.
MaxEntSolution solve_numeric(const MaxEntProblem& prob, std::size_t max_iterations = 200);

struct MaximumReport {
    double stationarity_residual = 0.0;
    double constraint_residual = 0.0;
    std::vector<double> hessian_diagonal;
    bool hessian_negative = false;
    std::size_t directions_tested = 0;
    std::size_t perturbation_violations = 0;
    double smallest_drop = 0.0;  // min over perturbations of H(p) - H(p + t d)
    std::string first_failure;   // empty when every check passed

    bool passed() const noexcept { return first_failure.empty(); }
};

inline constexpr std::uint64_t default_verification_seed = 0x9e3779b97f4a7c15ULL;

/// Stationarity, Hessian sign and random tangent perturbations (100
/// directions, steps 1e-3 and 1e-2, scaled to the distance from the domain
/// boundary). With n = 2 the tangent space is a point and no directions exist.
MaximumReport inspect_maximum(const MaxEntSolution& sol, const MaxEntProblem& prob,
                              std::uint64_t seed = default_verification_seed, std::size_t directions = 100);

// inspect_maximum, throwing VerificationFailure naming the first failed check.
MaximumReport verify_maximum(const MaxEntSolution& sol, const MaxEntProblem& prob,
                             std::uint64_t seed = default_verification_seed, std::size_t directions = 100);

std::string solution_to_json(const MaxEntSolution& sol);

} // namespace phistat
