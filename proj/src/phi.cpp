#include "phistat/phi.hpp"

#include "phistat/error.hpp"
#include "phistat/wu.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

namespace phistat {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();
constexpr double series_margin = 1e-12;

std::string describe(double u) {
    std::ostringstream os;
    os.precision(17);
    os << u;
    return os.str();
}

void require_inside(const PhiFunction& phi, double u, const char* what) {
    if (!phi.contains(u))
        fail(ErrorCode::DomainError, std::string(what) + ": argument " + describe(u) +
                                         " outside the validity interval (0, " + describe(phi.upper_bound()) + ")");
}

void require_unit_base(const PhiFunction& phi, const char* what) {
    if (!(phi.upper_bound() > 1.0))
        fail(ErrorCode::DomainError, std::string(what) + ": base point 1 is not inside the validity interval");
}

// 1 - sum_k T_k u^k
double series_reduced(std::span<const double> t, double u) {
    double acc = 0.0;
    for (auto it = t.rbegin(); it != t.rend(); ++it) acc = (acc + *it) * u;
    return 1.0 - acc;
}

// Smallest positive root of the reduced series, or +inf.
double series_upper_bound(std::span<const double> t) {
    double largest = 0.0;
    std::size_t degree = 0;
    for (std::size_t k = 0; k < t.size(); ++k)
        if (t[k] != 0.0) degree = k + 1;
    if (degree == 0) return inf;
    // Cauchy bound on the roots of 1 - sum T_k u^k.
    const double lead = std::abs(t[degree - 1]);
    largest = 1.0 / lead;
    for (std::size_t k = 0; k + 1 < degree; ++k) largest = std::max(largest, std::abs(t[k]) / lead);
    const double bound = 1.0 + largest;

    constexpr int steps = 8192;
    const double start = bound * 1e-12;
    const double ratio = std::pow(bound / start, 1.0 / steps);
    double lo = 0.0;
    double u = start;
    for (int i = 0; i <= steps; ++i, u *= ratio) {
        if (series_reduced(t, u) <= 0.0) {
            double hi = u;
            for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
                const double mid = 0.5 * (lo + hi);
                (series_reduced(t, mid) > 0.0 ? lo : hi) = mid;
            }
            return lo * (1.0 - series_margin);
        }
        lo = u;
    }
    return inf;
}

} // namespace

PhiFunction::PhiFunction(Kind kind, double parameter, std::vector<double> coefficients, double upper)
    : kind_(kind), parameter_(parameter), coefficients_(std::move(coefficients)), upper_(upper) {}

PhiFunction PhiFunction::identity() { return {Kind::Identity, 0.0, {}, inf}; }

PhiFunction PhiFunction::epsilon(double eps) {
    if (!(eps >= -1.0 && eps <= 1.0)) fail(ErrorCode::InvalidArgument, "epsilon must lie in [-1, 1]");
    return {Kind::Epsilon, eps, {}, eps < 0.0 ? -1.0 / eps : inf};
}

PhiFunction PhiFunction::haldane(double g) {
    if (!(g >= 0.0 && g <= 1.0)) fail(ErrorCode::InvalidArgument, "g must lie in [0, 1]");
    return {Kind::Haldane, g, {}, g > 0.0 ? 1.0 / g : inf};
}

PhiFunction PhiFunction::series(std::vector<double> coefficients) {
    for (double c : coefficients)
        if (!std::isfinite(c)) fail(ErrorCode::InvalidArgument, "series coefficients must be finite");
    const double upper = series_upper_bound(coefficients);
    return {Kind::Series, 0.0, std::move(coefficients), upper};
}

double PhiFunction::raw(double u) const noexcept {
    switch (kind_) {
    case Kind::Identity: return u;
    case Kind::Epsilon: return u * (1.0 + parameter_ * u);
    case Kind::Haldane: return u * (1.0 - parameter_ * u) * (1.0 + (1.0 - parameter_) * u);
    case Kind::Series: return u * series_reduced(coefficients_, u);
    }
    return u;
}

double PhiFunction::reduced(double u) const noexcept {
    switch (kind_) {
    case Kind::Identity: return 1.0;
    case Kind::Epsilon: return 1.0 + parameter_ * u;
    case Kind::Haldane: return (1.0 - parameter_ * u) * (1.0 + (1.0 - parameter_) * u);
    case Kind::Series: return series_reduced(coefficients_, u);
    }
    return 1.0;
}

bool PhiFunction::superlinear() const noexcept {
    if (upper_ != inf) return false;
    switch (kind_) {
    case Kind::Identity: return false;
    case Kind::Epsilon: return parameter_ > 0.0;
    case Kind::Haldane: return true;  // only g = 0 has an unbounded interval
    case Kind::Series:
        return std::any_of(coefficients_.begin(), coefficients_.end(), [](double c) { return c != 0.0; });
    }
    return false;
}

double phi_eval(const PhiFunction& phi, double u) {
    require_inside(phi, u, "phi_eval");
    return phi.raw(u);
}

double ln_phi_quadrature(const PhiFunction& phi, double u, const QuadratureConfig& cfg) {
    require_unit_base(phi, "ln_phi");
    require_inside(phi, u, "ln_phi");
    if (u == 1.0) return 0.0;
    // v = e^s turns dv / phi(v) into ds / (phi(v) / v).
    auto integrand = [&phi](double s) { return 1.0 / phi.reduced(std::exp(s)); };
    return integrate(integrand, 0.0, std::log(u), cfg).value;
}

double ln_phi(const PhiFunction& phi, double u, const QuadratureConfig& cfg) {
    require_unit_base(phi, "ln_phi");
    require_inside(phi, u, "ln_phi");
    if (u == 1.0) return 0.0;
    const double k = phi.parameter();
    switch (phi.kind()) {
    case PhiFunction::Kind::Identity: return std::log(u);
    case PhiFunction::Kind::Epsilon: return std::log(u) + std::log1p(k) - std::log1p(k * u);
    case PhiFunction::Kind::Haldane: {
        auto antiderivative = [k](double v) {
            return std::log(v) - k * std::log1p(-k * v) - (1.0 - k) * std::log1p((1.0 - k) * v);
        };
        return antiderivative(u) - antiderivative(1.0);
    }
    case PhiFunction::Kind::Series: return ln_phi_quadrature(phi, u, cfg);
    }
    return 0.0;
}

LogRange ln_phi_range(const PhiFunction& phi, const QuadratureConfig& cfg) {
    require_unit_base(phi, "ln_phi_range");
    // phi(u) ~ u near zero for every family, so the lower end is always -inf.
    LogRange range{-inf, inf};
    if (!phi.superlinear()) return range;
    switch (phi.kind()) {
    case PhiFunction::Kind::Epsilon: {
        const double eps = phi.parameter();
        range.upper = std::log1p(eps) - std::log(eps);
        break;
    }
    case PhiFunction::Kind::Haldane:
        range.upper = std::log(2.0);  // g = 0
        break;
    case PhiFunction::Kind::Series: {
        auto tail = [&phi](double v) { return 1.0 / phi.raw(v); };
        range.upper = integrate_to_infinity(tail, 1.0, cfg).value;
        break;
    }
    case PhiFunction::Kind::Identity: break;
    }
    return range;
}

double exp_phi(const PhiFunction& phi, double x, const QuadratureConfig& cfg) {
    const LogRange range = ln_phi_range(phi, cfg);
    if (!(x > range.lower && x < range.upper))
        fail(ErrorCode::RangeError, "exp_phi: " + describe(x) + " is outside the range of ln_phi (" +
                                        describe(range.lower) + ", " + describe(range.upper) + ")");
    if (x == 0.0) return 1.0;

    auto f = [&](double s) { return ln_phi(phi, std::exp(s), cfg) - x; };

    double s_lo = std::log(1e-12);
    constexpr double underflow = -745.0;
    while (f(s_lo) > 0.0) {
        if (s_lo == underflow) return 0.0;
        s_lo = std::max(2.0 * s_lo, underflow);
    }
    const double upper = phi.upper_bound();
    double s_hi = std::log(std::min(1e12, upper));
    if (upper <= 1e12) {
        double gap = 0.5;
        s_hi = std::log(upper * (1.0 - gap));
        while (f(s_hi) < 0.0) {
            gap *= 0.5;
            if (gap < 1e-15) fail(ErrorCode::ConvergenceError, "exp_phi: could not bracket from above");
            s_hi = std::log(upper * (1.0 - gap));
        }
    } else {
        while (f(s_hi) < 0.0) {
            s_hi *= 2.0;
            if (s_hi > 709.0 || std::exp(s_hi) >= upper)
                fail(ErrorCode::ConvergenceError, "exp_phi: could not bracket from above");
        }
    }

    auto f_df = [&](double s, double& value, double& slope) {
        const double u = std::exp(s);
        value = ln_phi(phi, u, cfg) - x;
        slope = 1.0 / phi.reduced(u);
    };
    const double guess = std::clamp(x, s_lo, s_hi);
    const Root root = solve_bracketed(f_df, s_lo, s_hi, cfg.root_tol(), cfg.max_root_iters(), guess);
    return std::exp(root.x);
}

double psi_eval(const PhiFunction& phi, double x, const QuadratureConfig& cfg) {
    const LogRange range = ln_phi_range(phi, cfg);
    if (x <= range.lower) return 0.0;
    if (x >= range.upper) return psi_infinity;
    return phi.raw(exp_phi(phi, x, cfg));
}

double chi_integral(const PhiFunction& phi, double u, const QuadratureConfig& cfg) {
    if (!(u > 0.0) || !std::isfinite(u)) fail(ErrorCode::DomainError, "chi: argument must be positive, got " + describe(u));
    const double top = 1.0 / u;
    if (!(top < phi.upper_bound()))
        fail(ErrorCode::DomainError, "chi: 1/u = " + describe(top) + " exceeds the validity interval");
    // v / phi(v) = 1 / reduced(v)
    auto near = [&phi](double v) { return 1.0 / phi.reduced(v); };
    if (top <= 1.0) return integrate(near, 0.0, top, cfg).value;
    auto far = [&phi](double s) {
        const double v = std::exp(s);
        return v / phi.reduced(v);
    };
    return integrate(near, 0.0, 1.0, cfg).value + integrate(far, 0.0, std::log(top), cfg).value;
}

double chi_eval(const PhiFunction& phi, double u, const QuadratureConfig& cfg) {
    return 1.0 / chi_integral(phi, u, cfg);
}

double deduced_log(const PhiFunction& phi, double u, const QuadratureConfig& cfg) {
    require_unit_base(phi, "deduced_log");
    if (!(u > 0.0)) fail(ErrorCode::DomainError, "deduced_log: argument must be positive, got " + describe(u));
    if (u == 1.0) return 0.0;
    return u * chi_integral(phi, u, cfg) - chi_integral(phi, 1.0, cfg) - ln_phi(phi, 1.0 / u, cfg);
}

double ln_chi(const PhiFunction& phi, double u, const QuadratureConfig& cfg) {
    require_unit_base(phi, "ln_chi");
    if (!(u > 0.0)) fail(ErrorCode::DomainError, "ln_chi: argument must be positive, got " + describe(u));
    if (!(1.0 / u < phi.upper_bound())) fail(ErrorCode::DomainError, "ln_chi: 1/u exceeds the validity interval");
    if (u == 1.0) return 0.0;
    // v = e^s: int_1^u dv / chi(v) = int_0^{ln u} e^s chi_integral(e^s) ds
    auto integrand = [&](double s) {
        const double v = std::exp(s);
        return v * chi_integral(phi, v, cfg);
    };
    return integrate(integrand, 0.0, std::log(u), cfg).value;
}

double mod_ln_phi(const PhiFunction& phi, double u) {
    if (!(u > 0.0)) fail(ErrorCode::DomainError, "mod_ln_phi: argument must be positive, got " + describe(u));
    const double k = phi.parameter();
    switch (phi.kind()) {
    case PhiFunction::Kind::Identity: return -std::log(u);
    case PhiFunction::Kind::Epsilon:
        if (!(1.0 + k * u > 0.0)) fail(ErrorCode::DomainError, "mod_ln_phi: 1 + eps u must be positive");
        return std::log1p(k * u) - std::log(u);
    case PhiFunction::Kind::Haldane:
        if (!(k * u < 1.0)) fail(ErrorCode::DomainError, "mod_ln_phi: g u must be below 1");
        return (1.0 - k) * std::log1p((1.0 - k) * u) + k * std::log1p(-k * u) - std::log(u);
    case PhiFunction::Kind::Series: break;
    }
    fail(ErrorCode::DomainError, "mod_ln_phi: no closed form for a series deformation");
}

double acharya_swamy_weight(double eps, double eta) {
    // e^eta - eps, arranged to avoid cancellation near eps = 1.
    const double denominator = eps > 0.0 ? std::expm1(eta) + (1.0 - eps) : std::exp(eta) - eps;
    if (!(denominator > 0.0))
        fail(ErrorCode::RangeError, "weight 1/(e^eta - eps) undefined: e^eta <= eps at eta = " + describe(eta) +
                                        ", eps = " + describe(eps));
    return 1.0 / denominator;
}

double mod_exp_phi(const PhiFunction& phi, double eta, const QuadratureConfig& cfg) {
    switch (phi.kind()) {
    case PhiFunction::Kind::Identity: return acharya_swamy_weight(0.0, eta);
    case PhiFunction::Kind::Epsilon: return acharya_swamy_weight(phi.parameter(), eta);
    case PhiFunction::Kind::Haldane:
        try {
            return wu_weight({phi.parameter(), eta}, cfg);
        } catch (const Error& e) {
            if (e.code() == ErrorCode::NoPositiveRoot) fail(ErrorCode::RangeError, e.what());
            throw;
        }
    case PhiFunction::Kind::Series: break;
    }
    fail(ErrorCode::DomainError, "mod_exp_phi: no closed form for a series deformation");
}

} // namespace phistat
