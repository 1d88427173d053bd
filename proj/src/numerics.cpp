#include "phistat/numerics.hpp"

#include "phistat/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

namespace phistat {

QuadratureConfig::QuadratureConfig(double abs_tol, double rel_tol, std::size_t max_subdivisions,
                                   double root_tol, std::size_t max_root_iters)
    : abs_tol_(abs_tol), rel_tol_(rel_tol), max_subdivisions_(max_subdivisions),
      root_tol_(root_tol), max_root_iters_(max_root_iters) {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || !(root_tol > 0.0))
        fail(ErrorCode::InvalidArgument, "tolerances must be strictly positive");
    if (max_subdivisions < 1 || max_root_iters < 1)
        fail(ErrorCode::InvalidArgument, "iteration limits must be at least 1");
}

QuadratureConfig QuadratureConfig::with_integration_tolerances(double abs_tol, double rel_tol) const {
    return QuadratureConfig(abs_tol, rel_tol, max_subdivisions_, root_tol_, max_root_iters_);
}

namespace {

// Kronrod abscissae on [0,1] (symmetric), 15-point Kronrod and 7-point Gauss weights.
constexpr std::array<double, 8> xgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> wgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> wg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& other) const { return error < other.error; }
};

double checked(const ScalarFunction& f, double x) {
    const double y = f(x);
    if (!std::isfinite(y)) {
        std::ostringstream os;
        os << "integrand is not finite at x = " << x;
        fail(ErrorCode::QuadratureError, os.str());
    }
    return y;
}

Panel gauss_kronrod15(const ScalarFunction& f, double a, double b) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    constexpr double uflow = std::numeric_limits<double>::min();
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    std::array<double, 7> left{}, right{};
    const double fc = checked(f, centre);
    double gauss = fc * wg[3];
    double kronrod = fc * wgk[7];
    double resabs = std::abs(kronrod);
    for (std::size_t j = 0; j < 7; ++j) {
        const double dx = half * xgk[j];
        left[j] = checked(f, centre - dx);
        right[j] = checked(f, centre + dx);
        const double pair = left[j] + right[j];
        kronrod += wgk[j] * pair;
        resabs += wgk[j] * (std::abs(left[j]) + std::abs(right[j]));
        if (j % 2 == 1) gauss += wg[j / 2] * pair;
    }
    const double mean = 0.5 * kronrod;
    double resasc = wgk[7] * std::abs(fc - mean);
    for (std::size_t j = 0; j < 7; ++j)
        resasc += wgk[j] * (std::abs(left[j] - mean) + std::abs(right[j] - mean));

    const double scale = std::abs(half);
    const double value = kronrod * half;
    resabs *= scale;
    resasc *= scale;
    double err = std::abs((kronrod - gauss) * half);
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    if (resabs > uflow / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);
    return {a, b, value, err};
}

} // namespace

Integral integrate(const ScalarFunction& f, double a, double b, const QuadratureConfig& cfg) {
    if (!std::isfinite(a) || !std::isfinite(b))
        fail(ErrorCode::InvalidArgument, "integration limits must be finite");
    if (a == b) return {};
    const double sign = a < b ? 1.0 : -1.0;
    if (a > b) std::swap(a, b);

    std::priority_queue<Panel> panels;
    panels.push(gauss_kronrod15(f, a, b));
    double value = panels.top().value;
    double error = panels.top().error;

    auto target = [&] { return std::max(cfg.abs_tol(), cfg.rel_tol() * std::abs(value)); };

    std::size_t count = 1;
    while (error > target()) {
        if (count >= cfg.max_subdivisions()) {
            std::ostringstream os;
            os << "tolerance not met on [" << a << ", " << b << "] after " << count
               << " subdivisions (error estimate " << error << ")";
            fail(ErrorCode::QuadratureError, os.str());
        }
        const Panel worst = panels.top();
        panels.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b))
            fail(ErrorCode::QuadratureError, "interval cannot be subdivided further");
        const Panel lower = gauss_kronrod15(f, worst.a, mid);
        const Panel upper = gauss_kronrod15(f, mid, worst.b);
        value += lower.value + upper.value - worst.value;
        error += lower.error + upper.error - worst.error;
        panels.push(lower);
        panels.push(upper);
        ++count;
    }

    // Re-sum to shed drift from the running updates.
    double total = 0.0, total_err = 0.0;
    while (!panels.empty()) {
        total += panels.top().value;
        total_err += panels.top().error;
        panels.pop();
    }
    return {sign * total, total_err, count};
}

Integral integrate_to_infinity(const ScalarFunction& f, double a, const QuadratureConfig& cfg) {
    if (!(a > 0.0)) fail(ErrorCode::InvalidArgument, "semi-infinite integral needs a positive lower limit");
    // v = 1/w, dv = -dw / w^2
    auto mapped = [&f](double w) { return f(1.0 / w) / (w * w); };
    return integrate(mapped, 0.0, 1.0 / a, cfg);
}

Root solve_bracketed(const ValueAndSlope& f_df, double lo, double hi, double f_tol,
                     std::size_t max_iters, std::optional<double> guess) {
    if (lo > hi) std::swap(lo, hi);
    double f_lo = 0.0, f_hi = 0.0, slope = 0.0;
    f_df(lo, f_lo, slope);
    f_df(hi, f_hi, slope);
    if (std::abs(f_lo) <= f_tol) return {lo, std::abs(f_lo), 0};
    if (std::abs(f_hi) <= f_tol) return {hi, std::abs(f_hi), 0};
    if ((f_lo < 0.0) == (f_hi < 0.0)) {
        std::ostringstream os;
        os << "root is not bracketed by [" << lo << ", " << hi << "]";
        fail(ErrorCode::RangeError, os.str());
    }
    // Orient so that f(neg) < 0 < f(pos).
    double neg = f_lo < 0.0 ? lo : hi;
    double pos = f_lo < 0.0 ? hi : lo;

    double x = (guess && *guess > lo && *guess < hi) ? *guess : 0.5 * (lo + hi);
    double step = hi - lo;
    double step_before = step;
    for (std::size_t it = 1; it <= max_iters; ++it) {
        double fx = 0.0;
        f_df(x, fx, slope);
        if (!std::isfinite(fx)) fail(ErrorCode::ConvergenceError, "non-finite function value in root solve");
        if (std::abs(fx) <= f_tol) return {x, std::abs(fx), it};
        (fx < 0.0 ? neg : pos) = x;

        const double a = std::min(neg, pos), b = std::max(neg, pos);
        const double mid = 0.5 * (a + b);
        if (b - a <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(a), std::abs(b)) ||
            !(mid > a && mid < b))
            return {x, std::abs(fx), it};

        const double newton = x - fx / slope;
        step_before = step;
        if (slope == 0.0 || !std::isfinite(newton) || newton <= a || newton >= b ||
            std::abs(2.0 * fx) > std::abs(step_before * slope)) {
            step = 0.5 * (b - a);
            x = mid;
        } else {
            step = fx / slope;
            x = newton;
        }
    }
    fail(ErrorCode::ConvergenceError, "root solve did not converge within the iteration limit");
}

} // namespace phistat
