#include "support.hpp"

#include "phistat/maxent.hpp"
#include "phistat/phi.hpp"
#include "phistat/random.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace phistat;
using doctest::Approx;

namespace {

MaxEntProblem problem(std::vector<double> energies, double mean, EntropyFamily family) {
    return {{EnergySpectrum::create(std::move(energies)), mean}, family};
}

MaxEntProblem random_problem(Rng& rng, EntropyFamily family) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform() * 7);
    std::vector<double> e(n);
    for (auto& x : e) x = 4.0 * rng.uniform();
    std::sort(e.begin(), e.end());
    const double mean = e.front() + (0.05 + 0.9 * rng.uniform()) * (e.back() - e.front());
    return problem(e, mean, family);
}

void check_invariants(const MaxEntSolution& s, const MaxEntProblem& prob) {
    const auto r = residuals(prob, s.p.values(), s.a, s.b);
    CHECK(r.normalization <= constraint_tolerance);
    CHECK(r.mean_energy <= constraint_tolerance);
    CHECK(r.stationarity <= stationarity_tolerance);
}

} // namespace

TEST_SUITE("maxent") {

TEST_CASE("closed-form examples") {
    struct Case {
        double eps;
        double a;
    };
    for (const auto& c : {Case{0.0, std::log(2.0)}, Case{1.0, std::log(3.0)}, Case{-1.0, 0.0}}) {
        CAPTURE(c.eps);
        const auto prob = problem({0.0, 1.0}, 0.5, EntropyFamily::epsilon(c.eps));
        const auto s = solve_closed_form(prob);
        CHECK(s.p[0] == Approx(0.5).epsilon(1e-12));
        CHECK(s.p[1] == Approx(0.5).epsilon(1e-12));
        CHECK(std::abs(s.a - c.a) < 1e-10);
        CHECK(std::abs(s.b) < 1e-10);
        check_invariants(s, prob);
    }
    const auto prob = problem({0.0, 1.0, 2.0}, 1.0, EntropyFamily::epsilon(0.0));
    const auto s = solve_closed_form(prob);
    for (std::size_t i = 0; i < 3; ++i) CHECK(s.p[i] == Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(std::abs(s.a - std::log(3.0)) < 1e-10);
    CHECK(std::abs(s.b) < 1e-10);
}

TEST_CASE("numeric examples") {
    const auto be = problem({0.0, 1.0}, 0.5, EntropyFamily::epsilon(1.0));
    const auto s = solve_numeric(be);
    CHECK(std::abs(s.p[0] - 0.5) < 1e-8);
    CHECK(std::abs(s.p[1] - 0.5) < 1e-8);
    check_invariants(s, be);
    const auto bgs = problem({0.0, 1.0}, 0.5, EntropyFamily::bgs());
    CHECK(solve_numeric(bgs).p[0] == Approx(0.5).epsilon(1e-12));
    CHECK(solve_closed_form(bgs).p[0] == Approx(0.5).epsilon(1e-12));

    Rng rng(99);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> e(6);
        for (auto& x : e) x = 4.0 * rng.uniform();
        std::sort(e.begin(), e.end());
        const auto prob = problem(e, e[0] + (0.1 + 0.8 * rng.uniform()) * (e[5] - e[0]), EntropyFamily::epsilon(-1.0));
        const auto closed = solve_closed_form(prob);
        const auto numeric = solve_numeric(prob);
        for (std::size_t i = 0; i < 6; ++i) CHECK(std::abs(closed.p[i] - numeric.p[i]) < 1e-7);
    }
}

TEST_CASE("infeasible targets") {
    const auto prob = problem({0.0, 1.0}, 1.0, EntropyFamily::epsilon(1.0));
    CHECK_ERROR(solve_closed_form(prob), InfeasibleConstraint);
    CHECK_ERROR(solve_numeric(prob), InfeasibleConstraint);
    CHECK_ERROR(solve_closed_form(problem({0.0, 1.0}, 2.0, EntropyFamily::haldane(0.5))), InfeasibleConstraint);
}

TEST_CASE("weight function examples") {
    CHECK(weight_function(EntropyFamily::epsilon(0.0), 0.0, 1.0, 0.0) == 1.0);
    CHECK(weight_function(EntropyFamily::epsilon(-1.0), 0.5, -0.5, 1.0) == 0.5);
    CHECK(weight_function(EntropyFamily::epsilon(1.0), std::log(2.0), 0.0, 3.0) == Approx(1.0).epsilon(1e-15));
    CHECK(weight_function(EntropyFamily::bgs(), 1.0, 0.0, 0.0) == Approx(std::exp(-1.0)).epsilon(1e-15));
    CHECK(weight_function(EntropyFamily::haldane(0.5), 0.0, 2.0, 0.0) == Approx(2.0 / std::sqrt(5.0)).epsilon(1e-15));
    CHECK_ERROR(weight_function(EntropyFamily::epsilon(1.0), -1.0, 0.0, 0.0), DomainError);
    CHECK_ERROR(weight_function(EntropyFamily::haldane(0.0), 0.0, 1.0, -1.0), DomainError);
}

TEST_CASE("weight equals the modified exponential") {
    for (double eps : {-1.0, -0.5, 0.0, 0.5, 1.0})
        for (double eta = -3.0; eta <= 3.0; eta += 0.5) {
            if (std::exp(eta) <= eps) continue;
            CHECK(weight_at(EntropyFamily::epsilon(eps), eta) == mod_exp_phi(PhiFunction::epsilon(eps), eta));
        }
}

TEST_CASE("comparative statics at fixed multipliers") {
    for (double x = -2.0; x <= 3.0; x += 0.25) {
        if (x <= 0.0) continue;
        const double bose = weight_at(EntropyFamily::epsilon(1.0), x);
        const double boltzmann = weight_at(EntropyFamily::epsilon(0.0), x);
        const double fermi = weight_at(EntropyFamily::epsilon(-1.0), x);
        CHECK(bose > boltzmann);
        CHECK(boltzmann > fermi);
    }
    for (const auto& f : {EntropyFamily::epsilon(-0.5), EntropyFamily::epsilon(0.5), EntropyFamily::haldane(0.3)}) {
        double previous = INFINITY;
        for (double e = 0.0; e <= 5.0; e += 0.25) {
            const double w = weight_function(f, 0.5, 1.0, e);
            CHECK(w < previous);
            previous = w;
        }
    }
}

TEST_CASE("closed form and Newton agree on random problems") {
    Rng rng(2024);
    const std::vector<EntropyFamily> families{
        EntropyFamily::epsilon(-1.0), EntropyFamily::epsilon(-0.5), EntropyFamily::epsilon(0.0),
        EntropyFamily::epsilon(0.5),  EntropyFamily::epsilon(1.0),  EntropyFamily::haldane(0.0),
        EntropyFamily::haldane(0.25), EntropyFamily::haldane(0.5),  EntropyFamily::haldane(0.75),
        EntropyFamily::haldane(1.0),  EntropyFamily::bgs()};
    for (int trial = 0; trial < 220; ++trial) {
        const auto& family = families[static_cast<std::size_t>(trial) % families.size()];
        const auto prob = random_problem(rng, family);
        CAPTURE(family.name());
        CAPTURE(prob.constraint.mean_energy);
        const auto closed = solve_closed_form(prob);
        const auto numeric = solve_numeric(prob);
        check_invariants(closed, prob);
        check_invariants(numeric, prob);
        for (std::size_t i = 0; i < closed.p.size(); ++i) CHECK(std::abs(closed.p[i] - numeric.p[i]) <= 1e-7);
        CHECK(std::abs(closed.a - numeric.a) <= 1e-6);
        CHECK(std::abs(closed.b - numeric.b) <= 1e-6);
        CHECK(closed.entropy >= entropy_value(family, feasible_point(prob.constraint)) - 1e-9);
    }
}

TEST_CASE("degenerate families give the same solutions") {
    Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        auto bose = random_problem(rng, EntropyFamily::epsilon(1.0));
        auto g0 = bose;
        g0.family = EntropyFamily::haldane(0.0);
        auto fermi = bose;
        fermi.family = EntropyFamily::epsilon(-1.0);
        auto g1 = bose;
        g1.family = EntropyFamily::haldane(1.0);
        const auto s1 = solve_closed_form(bose), s2 = solve_closed_form(g0);
        const auto s3 = solve_closed_form(fermi), s4 = solve_closed_form(g1);
        for (std::size_t i = 0; i < s1.p.size(); ++i) {
            CHECK(std::abs(s1.p[i] - s2.p[i]) <= 1e-8);
            CHECK(std::abs(s3.p[i] - s4.p[i]) <= 1e-8);
        }
        CHECK(std::abs(s1.a - s2.a) <= 1e-8);
        CHECK(std::abs(s3.b - s4.b) <= 1e-8);
    }
}

TEST_CASE("verification of maxima") {
    const auto be = problem({0.0, 1.0}, 0.5, EntropyFamily::epsilon(1.0));
    CHECK(verify_maximum(solve_closed_form(be), be).passed());

    const auto wu = problem({0.0, 1.0}, 0.5, EntropyFamily::haldane(0.5));
    const auto report = verify_maximum(solve_closed_form(wu), wu);
    CHECK(report.hessian_negative);
    CHECK(report.stationarity_residual <= stationarity_tolerance);

    const auto off = problem({0.0, 1.0}, 0.3, EntropyFamily::epsilon(1.0));
    const MaxEntSolution bogus{validate(std::vector{0.7, 0.3}), 0.1, 0.2, 0.0, 0.0, 0};
    CHECK_ERROR(verify_maximum(bogus, off), VerificationFailure);
    const auto inspected = inspect_maximum(bogus, off);
    CHECK_FALSE(inspected.passed());
    CHECK(inspected.first_failure.find("stationarity") != std::string::npos);
}

TEST_CASE("random perturbations never raise the entropy") {
    Rng rng(31);
    for (const auto& family : {EntropyFamily::epsilon(-1.0), EntropyFamily::epsilon(0.5), EntropyFamily::haldane(0.6)}) {
        for (int trial = 0; trial < 10; ++trial) {
            auto prob = random_problem(rng, family);
            const auto s = solve_closed_form(prob);
            const auto r = inspect_maximum(s, prob, 1000 + static_cast<std::uint64_t>(trial));
            CHECK(r.passed());
            CHECK(r.perturbation_violations == 0);
            for (double h : r.hessian_diagonal) CHECK(h < 0.0);
            if (s.p.size() >= 3) {
                CHECK(r.directions_tested == 100);
                CHECK(r.smallest_drop > 0.0);
            }
        }
    }
}

TEST_CASE("solution document") {
    const auto prob = problem({0.0, 1.0}, 0.5, EntropyFamily::epsilon(1.0));
    const auto doc = nlohmann::json::parse(solution_to_json(solve_closed_form(prob)));
    for (const char* key : {"p", "a", "b", "entropy", "residual", "iterations"}) CHECK(doc.contains(key));
    CHECK(doc["p"].size() == 2);
    CHECK(doc["a"].get<double>() == Approx(std::log(3.0)));
}

}
