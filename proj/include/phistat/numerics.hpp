#pragma once

#include <cstddef>
#include <functional>
#include <optional>

namespace phistat {

// Tolerances and limits shared by every quadrature and root solve.
// Immutable once constructed.
class QuadratureConfig {
public:
    QuadratureConfig() = default;
    QuadratureConfig(double abs_tol, double rel_tol, std::size_t max_subdivisions,
                     double root_tol, std::size_t max_root_iters);

    double abs_tol() const noexcept { return abs_tol_; }
    double rel_tol() const noexcept { return rel_tol_; }
    std::size_t max_subdivisions() const noexcept { return max_subdivisions_; }
    double root_tol() const noexcept { return root_tol_; }
    std::size_t max_root_iters() const noexcept { return max_root_iters_; }

    QuadratureConfig with_integration_tolerances(double abs_tol, double rel_tol) const;

private:
    double abs_tol_ = 1e-10;
    double rel_tol_ = 1e-10;
    std::size_t max_subdivisions_ = 2000;
    double root_tol_ = 1e-12;
    std::size_t max_root_iters_ = 200;
};

using ScalarFunction = std::function<double(double)>;

struct Integral {
    double value = 0.0;
    double error = 0.0;
    std::size_t subdivisions = 0;
};

/// Globally adaptive Gauss-Kronrod (7/15) integration over a finite interval.
/// The interval with the largest error estimate is bisected until the total
/// estimate drops below max(abs_tol, rel_tol * |value|). Throws
/// QuadratureError when max_subdivisions is exhausted or the integrand
/// returns a non-finite value. Endpoints are never evaluated, so integrable
/// endpoint singularities are fine.
Integral integrate(const ScalarFunction& f, double a, double b, const QuadratureConfig& cfg);

/// Integral of f over [a, +inf), mapped onto (0, 1/a] by v = 1/w. Requires a > 0.
Integral integrate_to_infinity(const ScalarFunction& f, double a, const QuadratureConfig& cfg);

struct Root {
    double x = 0.0;
    double residual = 0.0;
    std::size_t iterations = 0;
};

// f_df writes f(x) and f'(x).
using ValueAndSlope = std::function<void(double, double&, double&)>;

/// Safeguarded Newton iteration inside a sign-changing bracket [lo, hi].
/// A Newton step that leaves the bracket, or fails to halve it, is replaced
/// by bisection. Stops when |f| <= f_tol or the bracket has collapsed to a
/// few ulps; throws ConvergenceError after max_iters, or RangeError when f
/// does not change sign on the bracket.
Root solve_bracketed(const ValueAndSlope& f_df, double lo, double hi, double f_tol,
                     std::size_t max_iters, std::optional<double> guess = std::nullopt);

} // namespace phistat
