#pragma once

// Reference computations that share no code with the library.

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

// High-precision values computed offline with mpmath (50 digits), rounded to double.
inline constexpr double phi_entropy_eps1_half = 0.5232481437645478;       // eps = 1, p = (1/2, 1/2)
inline constexpr double phi_entropy_eps1_235 = 0.8114157270674134;        // eps = 1, p = (0.2, 0.3, 0.5)
inline constexpr double deduced_log_eps1_at2 = 0.5232481437645478;        // eps = 1, u = 2
inline constexpr double bose_einstein_entropy_half = 1.909542504884438;   // p = (1/2, 1/2)
inline constexpr double haldane_half_entropy_half = 1.682529167523141;    // g = 1/2, p = (1/2, 1/2)

inline double simpson_step(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                           double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

// Adaptive Simpson; f must be finite on [a, b].
inline double simpson(const std::function<double(double)>& f, double a, double b, double tol = 1e-12) {
    if (a == b) return 0.0;
    if (a > b) return -simpson(f, b, a, tol);
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    return simpson_step(f, a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, 50);
}

// int_0^x v / phi(v) dv with phi(v) / v = reduced(v) finite at 0.
inline double chi_integral(const std::function<double(double)>& reduced, double x) {
    return simpson([&](double v) { return 1.0 / reduced(v); }, 0.0, x, 1e-13);
}

// -sum p_i int_1^{p_i} v^-2 [int_0^v u / phi(u) du] dv
inline double phi_entropy(const std::function<double(double)>& reduced, const std::vector<double>& p) {
    double h = 0.0;
    for (double pi : p)
        h -= pi * simpson([&](double v) { return chi_integral(reduced, v) / (v * v); }, 1.0, pi, 1e-11);
    return h;
}

inline double bose_einstein_level(double p) { return (1.0 + p) * std::log(1.0 + p) - p * std::log(p); }
inline double fermi_dirac_level(double p) { return -(1.0 - p) * std::log(1.0 - p) - p * std::log(p); }

// omega^g (1 + omega)^(1-g) = e^eta by plain bisection on the log form.
inline double wu_omega_bisect(double g, double eta) {
    double lo = 1e-300, hi = 1.0;
    auto f = [&](double w) { return g * std::log(w) + (1.0 - g) * std::log1p(w) - eta; };
    while (f(hi) < 0.0) hi *= 2.0;
    for (int k = 0; k < 2000 && hi - lo > 0.0; ++k) {
        const double mid = std::sqrt(lo) * std::sqrt(hi);  // geometric midpoint
        const double next = (mid > lo && mid < hi) ? mid : 0.5 * (lo + hi);
        if (next <= lo || next >= hi) break;
        (f(next) < 0.0 ? lo : hi) = next;
    }
    return 0.5 * (lo + hi);
}

} // namespace oracle
