#include "phistat/maxent.hpp"

#include "phistat/error.hpp"
#include "phistat/phi.hpp"
#include "phistat/random.hpp"
#include "phistat/wu.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace phistat {

namespace {

bool bounded_below(const EntropyFamily& f) {
    return (f.kind() == EntropyFamily::Kind::Epsilon && f.parameter() > 0.0) ||
           (f.kind() == EntropyFamily::Kind::Haldane && f.parameter() == 0.0);
}

// Smallest admissible natural argument for weights that blow up: ln(eps).
double eta_floor(const EntropyFamily& f) {
    return f.kind() == EntropyFamily::Kind::Haldane ? 0.0 : std::log(f.parameter());
}

// phi(w), i.e. minus the derivative of the weight in eta.
double weight_slope(const PhiFunction& phi, double w) { return phi.raw(w); }

struct Occupations {
    std::vector<double> p;
    std::vector<double> slope;  // phi(p_i)
};

Occupations occupations(const EntropyFamily& f, const PhiFunction& phi, std::span<const double> e, double a,
                        double b, const QuadratureConfig& cfg) {
    Occupations out{std::vector<double>(e.size()), std::vector<double>(e.size())};
    for (std::size_t i = 0; i < e.size(); ++i) {
        out.p[i] = weight_at(f, a + b * e[i], cfg);
        out.slope[i] = weight_slope(phi, out.p[i]);
    }
    return out;
}

double sum(std::span<const double> xs) {
    double s = 0.0, c = 0.0;
    for (double x : xs) {
        const double t = s + x;
        c += std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
        s = t;
    }
    return s + c;
}

// Normalizing multiplier a at fixed b.
double solve_normalization(const EntropyFamily& f, const PhiFunction& phi, std::span<const double> e, double b,
                           const QuadratureConfig& cfg) {
    double min_exponent = std::numeric_limits<double>::infinity();
    for (double x : e) min_exponent = std::min(min_exponent, b * x);

    auto excess = [&](double a) { return sum(occupations(f, phi, e, a, b, cfg).p) - 1.0; };
    auto f_df = [&](double a, double& value, double& slope) {
        const Occupations occ = occupations(f, phi, e, a, b, cfg);
        value = sum(occ.p) - 1.0;
        slope = -sum(occ.slope);
    };

    double lo = 0.0, hi = 0.0;
    if (bounded_below(f)) {
        const double a_min = eta_floor(f) - min_exponent;
        double gap = 1.0;
        while (excess(a_min + gap) < 0.0) {
            gap *= 0.5;
            if (!(a_min + gap > a_min)) fail(ErrorCode::ConvergenceError, "normalization: cannot bracket a from below");
        }
        lo = a_min + gap;
        double reach = 1.0;
        while (excess(a_min + reach) > 0.0) {
            reach *= 2.0;
            if (reach > 1e300) fail(ErrorCode::ConvergenceError, "normalization: cannot bracket a from above");
        }
        hi = a_min + reach;
    } else {
        const double centre = -min_exponent;
        double step = 1.0;
        while (excess(centre - step) < 0.0) {
            step *= 2.0;
            if (step > 1e300) fail(ErrorCode::ConvergenceError, "normalization: cannot bracket a from below");
        }
        lo = centre - step;
        step = 1.0;
        while (excess(centre + step) > 0.0) {
            step *= 2.0;
            if (step > 1e300) fail(ErrorCode::ConvergenceError, "normalization: cannot bracket a from above");
        }
        hi = centre + step;
    }
    return solve_bracketed(f_df, lo, hi, 1e-15, cfg.max_root_iters()).x;
}

void require_interior(const MaxEntProblem& prob) {
    if (!prob.constraint.interior()) {
        std::ostringstream os;
        os.precision(17);
        os << "infeasible: mean energy " << prob.constraint.mean_energy << " is not strictly inside ("
           << prob.constraint.spectrum.lowest() << ", " << prob.constraint.spectrum.highest() << ")";
        fail(ErrorCode::InfeasibleConstraint, os.str());
    }
}

MaxEntSolution assemble(const MaxEntProblem& prob, std::vector<double> p, double a, double b,
                        std::size_t iterations) {
    const Residuals r = residuals(prob, p, a, b);
    MaxEntSolution sol{validate(p), a, b, 0.0, 0.0, iterations};
    sol.entropy = entropy_value(prob.family, sol.p);
    sol.residual = std::max({r.normalization, r.mean_energy, r.stationarity});
    return sol;
}

} // namespace

double weight_at(const EntropyFamily& family, double eta, const QuadratureConfig& cfg) {
    try {
        switch (family.kind()) {
        case EntropyFamily::Kind::BGS: return acharya_swamy_weight(0.0, eta);
        case EntropyFamily::Kind::Epsilon: return acharya_swamy_weight(family.parameter(), eta);
        case EntropyFamily::Kind::Haldane: return wu_weight({family.parameter(), eta}, cfg);
        }
    } catch (const Error& e) {
        if (e.code() == ErrorCode::RangeError || e.code() == ErrorCode::NoPositiveRoot)
            fail(ErrorCode::DomainError, e.what());
        throw;
    }
    return 0.0;
}

double weight_function(const EntropyFamily& family, double a, double b, double energy, const QuadratureConfig& cfg) {
    return weight_at(family, a + b * energy, cfg);
}

std::vector<double> stationarity_gradient(const EntropyFamily& family, std::span<const double> p) {
    std::vector<double> g = entropy_gradient(family, p);
    if (family.kind() == EntropyFamily::Kind::BGS)
        for (double& x : g) x += 1.0;
    return g;
}

Residuals residuals(const MaxEntProblem& prob, std::span<const double> p, double a, double b) {
    const auto e = prob.constraint.spectrum.values();
    Residuals r;
    r.normalization = std::abs(sum(p) - 1.0);
    r.mean_energy = std::abs(mean_energy(p, e) - prob.constraint.mean_energy);
    const std::vector<double> g = stationarity_gradient(prob.family, p);
    for (std::size_t i = 0; i < p.size(); ++i) r.stationarity = std::max(r.stationarity, std::abs(g[i] - a - b * e[i]));
    return r;
}

MaxEntSolution solve_closed_form(const MaxEntProblem& prob, const QuadratureConfig& cfg) {
    require_interior(prob);
    const auto e = prob.constraint.spectrum.values();
    const double target = prob.constraint.mean_energy;
    const double spread = prob.constraint.spectrum.highest() - prob.constraint.spectrum.lowest();
    const PhiFunction phi = prob.family.phi();

    // mean(b) - target; decreasing because d mean/db = -sum phi_i (E_i - <E>_phi)^2.
    auto f_df = [&](double b, double& value, double& slope) {
        const double a = solve_normalization(prob.family, phi, e, b, cfg);
        const Occupations occ = occupations(prob.family, phi, e, a, b, cfg);
        value = mean_energy(occ.p, e) - target;
        const double weight = sum(occ.slope);
        double centre = 0.0;
        for (std::size_t i = 0; i < e.size(); ++i) centre += occ.slope[i] * e[i];
        centre /= weight;
        double spread2 = 0.0;
        for (std::size_t i = 0; i < e.size(); ++i) spread2 += occ.slope[i] * (e[i] - centre) * (e[i] - centre);
        slope = -spread2;
    };
    auto excess = [&](double b) {
        double v = 0.0, s = 0.0;
        f_df(b, v, s);
        return v;
    };

    double lo = -1.0 / spread, hi = 1.0 / spread;
    for (int i = 0; excess(lo) < 0.0; ++i) {
        if (i > 200) fail(ErrorCode::ConvergenceError, "closed form: cannot bracket b from below");
        lo *= 2.0;
    }
    for (int i = 0; excess(hi) > 0.0; ++i) {
        if (i > 200) fail(ErrorCode::ConvergenceError, "closed form: cannot bracket b from above");
        hi *= 2.0;
    }
    const double tol = 1e-14 * std::max({1.0, std::abs(target), spread});
    const Root root = solve_bracketed(f_df, lo, hi, tol, cfg.max_root_iters(), 0.0);

    const double b = root.x;
    const double a = solve_normalization(prob.family, phi, e, b, cfg);
    std::vector<double> p = occupations(prob.family, phi, e, a, b, cfg).p;
    return assemble(prob, std::move(p), a, b, root.iterations);
}

MaxEntSolution solve_numeric(const MaxEntProblem& prob, std::size_t max_iterations) {
    require_interior(prob);
    const auto e = prob.constraint.spectrum.values();
    const std::size_t n = e.size();
    const double target = prob.constraint.mean_energy;
    const double ceiling = prob.family.occupation_ceiling();

    const SimplexPoint start = feasible_point(prob.constraint);
    std::vector<double> p(start.values().begin(), start.values().end());

    // Least-squares fit grad_i ~ a + b E_i for the starting multipliers.
    double a = 0.0, b = 0.0;
    {
        const std::vector<double> g = stationarity_gradient(prob.family, p);
        double me = 0.0, mg = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            me += e[i];
            mg += g[i];
        }
        me /= n;
        mg /= n;
        double sxy = 0.0, sxx = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            sxy += (e[i] - me) * (g[i] - mg);
            sxx += (e[i] - me) * (e[i] - me);
        }
        b = sxy / sxx;
        a = mg - b * me;
    }

    struct State {
        std::vector<double> stationarity;
        double r_sum = 0.0, r_mean = 0.0;
        double merit = 0.0;
    };
    auto evaluate = [&](const std::vector<double>& q, double qa, double qb) {
        State s;
        s.stationarity = stationarity_gradient(prob.family, q);
        for (std::size_t i = 0; i < n; ++i) s.stationarity[i] -= qa + qb * e[i];
        s.r_sum = sum(q) - 1.0;
        s.r_mean = mean_energy(q, e) - target;
        s.merit = s.r_sum * s.r_sum + s.r_mean * s.r_mean;
        for (double x : s.stationarity) s.merit += x * x;
        return s;
    };
    auto in_domain = [&](const std::vector<double>& q) {
        return std::all_of(q.begin(), q.end(), [&](double x) { return x > 0.0 && x < ceiling; });
    };
    auto converged = [&](const State& s, double scale) {
        double worst = 0.0;
        for (double x : s.stationarity) worst = std::max(worst, std::abs(x));
        return worst <= scale * stationarity_tolerance && std::abs(s.r_sum) <= scale * 1e-2 * constraint_tolerance &&
               std::abs(s.r_mean) <= scale * 1e-2 * constraint_tolerance;
    };

    State state = evaluate(p, a, b);
    std::size_t it = 0;
    for (; it < max_iterations; ++it) {
        if (converged(state, 1e-4)) break;

        // Newton step through the 2x2 Schur complement. phi_i = -1/H_ii.
        std::vector<double> phi(n);
        for (std::size_t i = 0; i < n; ++i) phi[i] = -1.0 / level_hessian(prob.family, p[i]);
        double s0 = 0.0, s1 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            s0 += phi[i];
            s1 += phi[i] * e[i];
        }
        const double centre = s1 / s0;
        double s2 = 0.0, rhs_a = 0.0, rhs_b = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = e[i] - centre;
            s2 += phi[i] * d * d;
            rhs_a += phi[i] * state.stationarity[i];
            rhs_b += phi[i] * d * state.stationarity[i];
        }
        const double shifted_da = (rhs_a + state.r_sum) / s0;
        const double db = (rhs_b + state.r_mean - centre * state.r_sum) / s2;
        const double da = shifted_da - centre * db;
        std::vector<double> dp(n);
        for (std::size_t i = 0; i < n; ++i) dp[i] = phi[i] * (state.stationarity[i] - da - e[i] * db);

        bool accepted = false;
        double t = 1.0;
        for (int halving = 0; halving <= 60; ++halving, t *= 0.5) {
            std::vector<double> q(n);
            for (std::size_t i = 0; i < n; ++i) q[i] = p[i] + t * dp[i];
            if (!in_domain(q)) continue;
            State next = evaluate(q, a + t * da, b + t * db);
            if (next.merit < state.merit) {
                p = std::move(q);
                a += t * da;
                b += t * db;
                state = std::move(next);
                accepted = true;
                break;
            }
        }
        if (!accepted) break;  // no further progress at working precision
    }
    if (!converged(state, 1.0))
        fail(ErrorCode::ConvergenceError, "Newton iteration did not reach the stationarity tolerance");
    return assemble(prob, std::move(p), a, b, it);
}

MaximumReport inspect_maximum(const MaxEntSolution& sol, const MaxEntProblem& prob, std::uint64_t seed,
                              std::size_t directions) {
    MaximumReport report;
    const auto p = sol.p.values();
    const auto e = prob.constraint.spectrum.values();
    const std::size_t n = p.size();
    if (n != e.size()) fail(ErrorCode::DimensionMismatch, "solution and spectrum sizes differ");

    const Residuals r = residuals(prob, p, sol.a, sol.b);
    report.stationarity_residual = r.stationarity;
    report.constraint_residual = std::max(r.normalization, r.mean_energy);
    report.hessian_diagonal = entropy_hessian(prob.family, p);
    report.hessian_negative =
        std::all_of(report.hessian_diagonal.begin(), report.hessian_diagonal.end(), [](double h) { return h < 0.0; });

    auto note = [&report](const std::string& what) {
        if (report.first_failure.empty()) report.first_failure = what;
    };
    if (!(report.stationarity_residual <= stationarity_tolerance)) {
        std::ostringstream os;
        os << "stationarity residual " << report.stationarity_residual << " exceeds " << stationarity_tolerance;
        note(os.str());
    }
    if (!(report.constraint_residual <= constraint_tolerance)) {
        std::ostringstream os;
        os << "constraint residual " << report.constraint_residual << " exceeds " << constraint_tolerance;
        note(os.str());
    }
    if (!report.hessian_negative) note("Hessian diagonal has a non-negative entry");

    report.smallest_drop = std::numeric_limits<double>::infinity();
    if (n >= 3 && directions > 0) {
        // Orthonormal basis of span{1, E}; tangent directions are orthogonal to both.
        const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
        double mean_e = 0.0;
        for (double x : e) mean_e += x;
        mean_e /= n;
        std::vector<double> u2(n);
        double norm2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            u2[i] = e[i] - mean_e;
            norm2 += u2[i] * u2[i];
        }
        for (double& x : u2) x /= std::sqrt(norm2);

        const double ceiling = prob.family.occupation_ceiling();
        Rng rng(seed);
        for (std::size_t k = 0; k < directions; ++k) {
            std::vector<double> d(n);
            for (double& x : d) x = rng.normal();
            for (int pass = 0; pass < 2; ++pass) {
                double c1 = 0.0, c2 = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    c1 += d[i] * inv_sqrt_n;
                    c2 += d[i] * u2[i];
                }
                for (std::size_t i = 0; i < n; ++i) d[i] -= c1 * inv_sqrt_n + c2 * u2[i];
            }
            double scale = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double room = std::min(p[i], ceiling - p[i]);
                scale = std::max(scale, std::abs(d[i]) / room);
            }
            if (!(scale > 0.0)) continue;
            for (double& x : d) x /= scale;

            ++report.directions_tested;
            for (double t : {1e-3, 1e-2}) {
                std::vector<double> q(n);
                for (std::size_t i = 0; i < n; ++i) q[i] = p[i] + t * d[i];
                // Sum level differences rather than differencing two totals.
                double drop = 0.0;
                for (std::size_t i = 0; i < n; ++i)
                    drop += level_entropy(prob.family, p[i]) - level_entropy(prob.family, q[i]);
                report.smallest_drop = std::min(report.smallest_drop, drop);
                if (!(drop > 0.0)) ++report.perturbation_violations;
            }
        }
    }
    if (report.perturbation_violations > 0) {
        std::ostringstream os;
        os << report.perturbation_violations << " tangent perturbations did not lower the entropy";
        note(os.str());
    }
    return report;
}

MaximumReport verify_maximum(const MaxEntSolution& sol, const MaxEntProblem& prob, std::uint64_t seed,
                             std::size_t directions) {
    MaximumReport report = inspect_maximum(sol, prob, seed, directions);
    if (!report.passed()) fail(ErrorCode::VerificationFailure, report.first_failure);
    return report;
}

std::string solution_to_json(const MaxEntSolution& sol) {
    nlohmann::json doc;
    doc["p"] = std::vector<double>(sol.p.values().begin(), sol.p.values().end());
    doc["a"] = sol.a;
    doc["b"] = sol.b;
    doc["entropy"] = sol.entropy;
    doc["residual"] = sol.residual;
    doc["iterations"] = sol.iterations;
    return doc.dump();
}

} // namespace phistat
