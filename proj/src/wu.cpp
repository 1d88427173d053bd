#include "phistat/wu.hpp"

#include "phistat/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace phistat {

namespace {

void validate(const WuQuery& q) {
    if (!(q.g >= 0.0 && q.g <= 1.0)) fail(ErrorCode::InvalidArgument, "Wu: g must lie in [0, 1]");
    if (!std::isfinite(q.eta)) fail(ErrorCode::InvalidArgument, "Wu: eta must be finite");
}

// ln(1 + e^t) without overflow.
double softplus(double t) { return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t)); }

double logistic(double t) {
    return t >= 0.0 ? 1.0 / (1.0 + std::exp(-t)) : std::exp(t) / (1.0 + std::exp(t));
}

} // namespace

double wu_omega_iterative(const WuQuery& q, const QuadratureConfig& cfg) {
    validate(q);
    if (!(q.g > 0.0)) fail(ErrorCode::InvalidArgument, "Wu: the iterative solver needs g > 0");
    const double g = q.g, eta = q.eta;

    auto f_df = [g, eta](double t, double& value, double& slope) {
        value = g * t + (1.0 - g) * softplus(t) - eta;
        slope = g + (1.0 - g) * logistic(t);
    };
    // f(eta) = (1-g) ln(1 + e^-eta) >= 0 and f' >= g bound the root from both sides.
    const double hi = eta;
    const double lo = eta - (1.0 - g) * softplus(-eta) / g - 1.0;
    const double tol = std::min(cfg.root_tol(), 1e-14) * std::max(1.0, std::abs(eta));
    const Root root = solve_bracketed(f_df, lo, hi, tol, cfg.max_root_iters(), eta);
    return std::exp(root.x);
}

double wu_omega(const WuQuery& q, const QuadratureConfig& cfg) {
    validate(q);
    if (q.g == 0.0) {
        if (!(q.eta > 0.0))
            fail(ErrorCode::NoPositiveRoot, "Wu: g = 0 has no positive root for eta <= 0 (eta = " +
                                                std::to_string(q.eta) + ")");
        return std::expm1(q.eta);
    }
    if (q.g == 1.0) return std::exp(q.eta);
    if (q.g == 0.5) {
        // omega (1 + omega) = e^{2 eta}
        if (q.eta > 0.0) return std::exp(q.eta) * std::sqrt(1.0 + 0.25 * std::exp(-2.0 * q.eta)) - 0.5;
        const double x = std::exp(2.0 * q.eta);
        return 2.0 * x / (1.0 + std::sqrt(1.0 + 4.0 * x));
    }
    return wu_omega_iterative(q, cfg);
}

double wu_weight(const WuQuery& q, const QuadratureConfig& cfg) {
    const double omega = wu_omega(q, cfg);
    if (q.g == 0.0) return 1.0 / omega;
    return 1.0 / (omega + q.g);
}

double wu_stationarity_check(double g, double p, double eta) {
    if (!(g >= 0.0 && g <= 1.0)) fail(ErrorCode::InvalidArgument, "Wu: g must lie in [0, 1]");
    if (!(p > 0.0) || !(g * p < 1.0)) fail(ErrorCode::DomainError, "Wu: need 0 < p < 1/g");
    const double lhs = std::exp((1.0 - g) * std::log1p((1.0 - g) * p) + g * std::log1p(-g * p) - std::log(p));
    return std::abs(lhs - std::exp(eta));
}

} // namespace phistat
