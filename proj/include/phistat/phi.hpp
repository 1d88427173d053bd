#pragma once

#include "phistat/numerics.hpp"

#include <limits>
#include <span>
#include <vector>

namespace phistat {

/// A deformation function phi(u) > 0 on its validity interval (0, upper_bound()).
///
///   Identity         phi(u) = u
///   Epsilon(eps)     phi(u) = u (1 + eps u),                 eps in [-1, 1]
///   Haldane(g)       phi(u) = u (1 - g u)(1 + (1 - g) u),    g in [0, 1]
///   Series(T1..Tm)   phi(u) = u - sum_{n>=2} T_{n-1} u^n
///
/// Epsilon(eps < 0) and Haldane(g > 0) vanish at -1/eps and 1/g. A series is
/// valid up to its smallest positive root (less a 1e-12 relative margin), or
/// everywhere when it has none.
class PhiFunction {
public:
    enum class Kind { Identity, Epsilon, Haldane, Series };

    static PhiFunction identity();
    static PhiFunction epsilon(double eps);
    static PhiFunction haldane(double g);
    static PhiFunction series(std::vector<double> coefficients);

    Kind kind() const noexcept { return kind_; }
    // eps or g; zero for Identity and Series.
    double parameter() const noexcept { return parameter_; }
    std::span<const double> coefficients() const noexcept { return coefficients_; }
    double upper_bound() const noexcept { return upper_; }
    bool contains(double u) const noexcept { return u > 0.0 && u < upper_; }

    // phi(u) without the domain check.
    double raw(double u) const noexcept;
    // phi(u) / u, finite as u -> 0.
    double reduced(double u) const noexcept;
    // True when phi(u) grows faster than linearly as u -> infinity.
    bool superlinear() const noexcept;

private:
    PhiFunction(Kind kind, double parameter, std::vector<double> coefficients, double upper);

    Kind kind_;
    double parameter_;
    std::vector<double> coefficients_;
    double upper_;
};

inline constexpr double psi_infinity = std::numeric_limits<double>::infinity();

double phi_eval(const PhiFunction& phi, double u);

/// ln_phi(u) = int_1^u dv / phi(v). Closed form for the three built-in
/// families, quadrature for Series. Needs 1 inside the validity interval
/// (fails for Epsilon(-1), Haldane(1)).
double ln_phi(const PhiFunction& phi, double u, const QuadratureConfig& cfg = {});

// Same integral, always by quadrature.
double ln_phi_quadrature(const PhiFunction& phi, double u, const QuadratureConfig& cfg = {});

// Open range (lower, upper) of ln_phi over the validity interval.
struct LogRange {
    double lower;
    double upper;
};
LogRange ln_phi_range(const PhiFunction& phi, const QuadratureConfig& cfg = {});

/// Inverse of ln_phi by bracketed Newton in log(u). Throws RangeError when x
/// lies outside ln_phi_range.
double exp_phi(const PhiFunction& phi, double x, const QuadratureConfig& cfg = {});

/// psi(x) = phi(exp_phi(x)) inside the range of ln_phi, 0 below it and
/// psi_infinity above it.
double psi_eval(const PhiFunction& phi, double x, const QuadratureConfig& cfg = {});

// int_0^{1/u} v / phi(v) dv
double chi_integral(const PhiFunction& phi, double u, const QuadratureConfig& cfg = {});

/// chi(u) = 1 / int_0^{1/u} v / phi(v) dv
double chi_eval(const PhiFunction& phi, double u, const QuadratureConfig& cfg = {});

/// omega(u) = u int_0^{1/u} v/phi - int_0^1 v/phi - ln_phi(1/u), with omega(1) = 0.
double deduced_log(const PhiFunction& phi, double u, const QuadratureConfig& cfg = {});

// ln_chi(u) = int_1^u dv / chi(v), by nested quadrature.
double ln_chi(const PhiFunction& phi, double u, const QuadratureConfig& cfg = {});

/// Modified logarithm, closed forms with d/du = -1/phi(u):
///   Epsilon: ln((1 + eps u) / u)
///   Haldane: ln((1 + (1-g) u)^(1-g) (1 - g u)^g / u)
/// Identity is treated as Epsilon(0). Series has no closed form (DomainError).
double mod_ln_phi(const PhiFunction& phi, double u);

/// Inverse of mod_ln_phi: 1 / (e^eta - eps) for Epsilon, the Wu weight for Haldane.
double mod_exp_phi(const PhiFunction& phi, double eta, const QuadratureConfig& cfg = {});

/// 1 / (e^eta - eps), evaluated as 1 / (expm1(eta) + (1 - eps)). RangeError
/// when the denominator is not positive. Shared by every weight-function path
/// so the identities between them hold bit for bit.
double acharya_swamy_weight(double eps, double eta);

} // namespace phistat
