#include "oracles.hpp"
#include "support.hpp"

#include "phistat/phi.hpp"

#include <cmath>
#include <numbers>
#include <vector>

using namespace phistat;
using doctest::Approx;

namespace {

const double e = std::numbers::e;

std::vector<PhiFunction> built_in() {
    return {PhiFunction::identity(),       PhiFunction::epsilon(1.0),  PhiFunction::epsilon(0.5),
            PhiFunction::epsilon(0.0),     PhiFunction::epsilon(-0.5), PhiFunction::haldane(0.0),
            PhiFunction::haldane(0.25),    PhiFunction::haldane(0.5),  PhiFunction::haldane(0.75)};
}

// Log-spaced points strictly inside (0, min(upper, 50)).
std::vector<double> log_grid(const PhiFunction& phi, std::size_t n = 25) {
    const double top = std::min(phi.upper_bound(), 50.0) * 0.98;
    std::vector<double> u;
    for (std::size_t k = 0; k < n; ++k) u.push_back(1e-3 * std::pow(top / 1e-3, static_cast<double>(k) / (n - 1)));
    return u;
}

} // namespace

TEST_SUITE("phi") {

TEST_CASE("construction") {
    CHECK_ERROR(PhiFunction::epsilon(1.5), InvalidArgument);
    CHECK_ERROR(PhiFunction::epsilon(NAN), InvalidArgument);
    CHECK_ERROR(PhiFunction::haldane(-0.1), InvalidArgument);
    CHECK_ERROR(PhiFunction::series({1.0, INFINITY}), InvalidArgument);
    CHECK(PhiFunction::epsilon(-0.5).upper_bound() == 2.0);
    CHECK(PhiFunction::haldane(0.25).upper_bound() == 4.0);
    CHECK(std::isinf(PhiFunction::epsilon(0.5).upper_bound()));
    // u - u^2 / 2 vanishes at 2; the stored bound sits a hair inside
    const auto s = PhiFunction::series({0.5});
    CHECK(s.upper_bound() < 2.0);
    CHECK(s.upper_bound() == Approx(2.0).epsilon(1e-11));
    CHECK(std::isinf(PhiFunction::series({-1.0}).upper_bound()));
}

TEST_CASE("phi_eval examples") {
    CHECK(phi_eval(PhiFunction::epsilon(1.0), 1.0) == 2.0);
    CHECK(phi_eval(PhiFunction::haldane(0.0), 2.0) == 6.0);
    CHECK(phi_eval(PhiFunction::haldane(1.0), 0.5) == 0.25);
    CHECK(phi_eval(PhiFunction::identity(), 3.5) == 3.5);
    CHECK(phi_eval(PhiFunction::series({0.5, 0.25}), 1.0) == Approx(1.0 - 0.5 - 0.25));
}

TEST_CASE("phi_eval domain errors") {
    CHECK_ERROR(phi_eval(PhiFunction::identity(), 0.0), DomainError);
    CHECK_ERROR(phi_eval(PhiFunction::epsilon(1.0), -1.0), DomainError);
    CHECK_ERROR(phi_eval(PhiFunction::haldane(0.5), 2.0), DomainError);
    CHECK_ERROR(phi_eval(PhiFunction::epsilon(-1.0), 1.0), DomainError);
    CHECK_ERROR(phi_eval(PhiFunction::series({0.5}), 2.0), DomainError);
}

TEST_CASE("degenerate families coincide exactly") {
    for (double u : {0.01, 0.3, 0.5, 0.99}) {
        CHECK(phi_eval(PhiFunction::haldane(0.0), u) == phi_eval(PhiFunction::epsilon(1.0), u));
        CHECK(phi_eval(PhiFunction::haldane(1.0), u) == phi_eval(PhiFunction::epsilon(-1.0), u));
    }
    for (double u : {2.0, 17.0, 1e3}) CHECK(phi_eval(PhiFunction::haldane(0.0), u) == phi_eval(PhiFunction::epsilon(1.0), u));
}

TEST_CASE("ln_phi examples") {
    CHECK(ln_phi(PhiFunction::identity(), e) == Approx(1.0).epsilon(1e-15));
    CHECK(ln_phi(PhiFunction::epsilon(1.0), 2.0) == Approx(std::log(4.0 / 3.0)).epsilon(1e-14));
    for (const auto& phi : built_in()) CHECK(ln_phi(phi, 1.0) == 0.0);
    CHECK(ln_phi(PhiFunction::series({0.5}), 1.0) == 0.0);
}

TEST_CASE("ln_phi closed forms agree with quadrature") {
    for (const auto& phi : built_in())
        for (double u : log_grid(phi, 9)) CHECK(ln_phi(phi, u) == Approx(ln_phi_quadrature(phi, u)).epsilon(1e-9));
}

TEST_CASE("ln_phi for a series against the Simpson oracle") {
    const auto phi = PhiFunction::series({0.5, 0.1});
    for (double u : {0.05, 0.4, 1.0, 1.5}) {
        const double want = oracle::simpson([](double v) { return 1.0 / (v - 0.5 * v * v - 0.1 * v * v * v); }, 1.0, u, 1e-13);
        CHECK(ln_phi(phi, u) == Approx(want).epsilon(1e-9));
    }
    // T = (-1) is u + u^2, the eps = 1 deformation
    const auto be = PhiFunction::series({-1.0});
    CHECK(ln_phi(be, 3.0) == Approx(ln_phi(PhiFunction::epsilon(1.0), 3.0)).epsilon(1e-10));
    CHECK(ln_phi_range(be).upper == Approx(std::log(2.0)).epsilon(1e-9));
}

TEST_CASE("ln_phi needs 1 inside the validity interval") {
    CHECK_ERROR(ln_phi(PhiFunction::epsilon(-1.0), 0.5), DomainError);
    CHECK_ERROR(ln_phi(PhiFunction::haldane(1.0), 0.5), DomainError);
    CHECK_ERROR(ln_phi(PhiFunction::haldane(0.5), 2.5), DomainError);
}

TEST_CASE("ln_phi ranges") {
    CHECK(std::isinf(ln_phi_range(PhiFunction::identity()).upper));
    CHECK(ln_phi_range(PhiFunction::identity()).lower == -INFINITY);
    CHECK(ln_phi_range(PhiFunction::epsilon(1.0)).upper == Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(ln_phi_range(PhiFunction::epsilon(0.5)).upper == Approx(std::log(3.0)).epsilon(1e-15));
    CHECK(ln_phi_range(PhiFunction::haldane(0.0)).upper == Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(std::isinf(ln_phi_range(PhiFunction::epsilon(-0.5)).upper));
    CHECK(std::isinf(ln_phi_range(PhiFunction::haldane(0.5)).upper));
}

TEST_CASE("exp_phi examples") {
    CHECK(exp_phi(PhiFunction::identity(), 1.0) == Approx(e).epsilon(1e-13));
    for (const auto& phi : built_in()) CHECK(exp_phi(phi, 0.0) == 1.0);
    CHECK(exp_phi(PhiFunction::epsilon(1.0), std::log(4.0 / 3.0)) == Approx(2.0).epsilon(1e-11));
    CHECK_ERROR(exp_phi(PhiFunction::epsilon(1.0), 1.0), RangeError);
    CHECK_ERROR(exp_phi(PhiFunction::epsilon(1.0), std::log(2.0)), RangeError);
}

TEST_CASE("psi examples") {
    CHECK(psi_eval(PhiFunction::identity(), 0.0) == Approx(1.0));
    CHECK(psi_eval(PhiFunction::epsilon(1.0), std::log(4.0 / 3.0)) == Approx(6.0).epsilon(1e-10));
    CHECK(psi_eval(PhiFunction::epsilon(1.0), 1.0) == psi_infinity);
    CHECK(psi_eval(PhiFunction::epsilon(0.5), 5.0) == psi_infinity);
    const double tiny = psi_eval(PhiFunction::haldane(0.5), -600.0);
    CHECK(tiny >= 0.0);
    CHECK(tiny < 1e-200);
}

TEST_CASE("chi examples") {
    CHECK(chi_eval(PhiFunction::identity(), 2.0) == Approx(2.0).epsilon(1e-12));
    CHECK(chi_eval(PhiFunction::epsilon(1.0), 1.0) == Approx(1.0 / std::log(2.0)).epsilon(1e-12));
    CHECK(chi_eval(PhiFunction::epsilon(0.0), 10.0) == Approx(10.0).epsilon(1e-12));
    CHECK_ERROR(chi_eval(PhiFunction::haldane(0.5), 0.4), DomainError);
    CHECK_ERROR(chi_eval(PhiFunction::identity(), 0.0), DomainError);
}

TEST_CASE("chi integral against the Simpson oracle") {
    const auto phi = PhiFunction::haldane(0.3);
    for (double u : {0.5, 1.0, 4.0}) {
        const double want = oracle::chi_integral([](double v) { return (1.0 - 0.3 * v) * (1.0 + 0.7 * v); }, 1.0 / u);
        CHECK(chi_integral(phi, u) == Approx(want).epsilon(1e-10));
    }
}

TEST_CASE("deduced logarithm examples") {
    for (const auto& phi : built_in()) CHECK(deduced_log(phi, 1.0) == 0.0);
    CHECK(deduced_log(PhiFunction::identity(), e) == Approx(1.0).epsilon(1e-10));
    const auto be = PhiFunction::epsilon(1.0);
    CHECK(std::abs(deduced_log(be, 2.0) - ln_chi(be, 2.0)) < 1e-8);
    CHECK(std::abs(deduced_log(be, 2.0) - oracle::deduced_log_eps1_at2) < 1e-10);
    CHECK(std::abs(ln_chi(be, 2.0) - oracle::deduced_log_eps1_at2) < 1e-8);
}

TEST_CASE("deduced logarithm is the chi-logarithm") {
    for (const auto& phi : {PhiFunction::identity(), PhiFunction::epsilon(1.0)})
        for (double u : {0.1, 0.25, 0.5, 0.9, 1.5, 3.0, 6.0, 10.0}) CHECK(std::abs(deduced_log(phi, u) - ln_chi(phi, u)) < 1e-7);
}

TEST_CASE("modified logarithm examples") {
    CHECK(mod_ln_phi(PhiFunction::epsilon(0.0), 1.0) == 0.0);
    CHECK(mod_ln_phi(PhiFunction::epsilon(1.0), 1.0) == Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(mod_ln_phi(PhiFunction::epsilon(-1.0), 0.5) == Approx(0.0).epsilon(1e-15));
    CHECK(std::abs(mod_ln_phi(PhiFunction::haldane(0.5), 2.0 / std::sqrt(5.0))) < 1e-15);
    CHECK(mod_ln_phi(PhiFunction::identity(), 2.0) == Approx(-std::log(2.0)));
    CHECK_ERROR(mod_ln_phi(PhiFunction::epsilon(1.0), 0.0), DomainError);
    CHECK_ERROR(mod_ln_phi(PhiFunction::epsilon(-1.0), 1.0), DomainError);
    CHECK_ERROR(mod_ln_phi(PhiFunction::haldane(0.5), 2.0), DomainError);
    CHECK_ERROR(mod_ln_phi(PhiFunction::series({0.5}), 1.0), DomainError);
}

TEST_CASE("modified exponential examples") {
    CHECK(mod_exp_phi(PhiFunction::epsilon(-1.0), 0.0) == 0.5);
    CHECK(mod_exp_phi(PhiFunction::epsilon(1.0), std::log(2.0)) == Approx(1.0).epsilon(1e-15));
    CHECK(mod_exp_phi(PhiFunction::haldane(0.5), 0.0) == Approx(2.0 / std::sqrt(5.0)).epsilon(1e-15));
    CHECK_ERROR(mod_exp_phi(PhiFunction::epsilon(1.0), 0.0), RangeError);
    CHECK_ERROR(mod_exp_phi(PhiFunction::epsilon(0.5), -1.0), RangeError);
    CHECK_ERROR(mod_exp_phi(PhiFunction::haldane(0.0), -1.0), RangeError);
}

TEST_CASE("identity deformation collapses to ln and exp") {
    for (double u : {1e-3, 0.2, 1.0, 7.0, 300.0}) CHECK(std::abs(ln_phi(PhiFunction::identity(), u) - std::log(u)) < 1e-10);
    for (double eta : {-3.0, -0.5, 0.0, 2.0}) CHECK(std::abs(mod_exp_phi(PhiFunction::identity(), eta) - std::exp(-eta)) < 1e-10 * std::exp(-eta));
}

TEST_CASE("round trips on log grids") {
    for (const auto& phi : built_in()) {
        CAPTURE(phi.parameter());
        for (double u : log_grid(phi)) {
            CAPTURE(u);
            CHECK(std::abs(exp_phi(phi, ln_phi(phi, u)) - u) <= 1e-8 * u);
            CHECK(std::abs(mod_exp_phi(phi, mod_ln_phi(phi, u)) - u) <= 1e-8 * u);
        }
    }
}

TEST_CASE("derivatives by central differences") {
    const double h = 1e-6;
    for (const auto& phi : built_in()) {
        CAPTURE(phi.parameter());
        for (double u : {0.2, 0.5, 0.9, 1.7}) {
            if (!phi.contains(u + h) || !phi.contains(1.0)) continue;
            CAPTURE(u);
            const double inv = 1.0 / phi_eval(phi, u);
            const double d_ln = (ln_phi(phi, u + h) - ln_phi(phi, u - h)) / (2.0 * h);
            CHECK(d_ln == Approx(inv).epsilon(1e-5));
            const double d_mod = (mod_ln_phi(phi, u + h) - mod_ln_phi(phi, u - h)) / (2.0 * h);
            CHECK(d_mod == Approx(-inv).epsilon(1e-5));
            const double x = ln_phi(phi, u);
            const double d_exp = (exp_phi(phi, x + h) - exp_phi(phi, x - h)) / (2.0 * h);
            CHECK(d_exp == Approx(psi_eval(phi, x)).epsilon(1e-5));
            if (!phi.contains(1.0 / (u - h))) continue;
            const double d_omega = (deduced_log(phi, u + h) - deduced_log(phi, u - h)) / (2.0 * h);
            CHECK(d_omega == Approx(1.0 / chi_eval(phi, u)).epsilon(1e-5));
        }
    }
}

TEST_CASE("monotonicity") {
    for (const auto& phi : built_in()) {
        const auto grid = log_grid(phi, 40);
        for (std::size_t k = 1; k < grid.size(); ++k) {
            CHECK(ln_phi(phi, grid[k]) > ln_phi(phi, grid[k - 1]));
            CHECK(mod_ln_phi(phi, grid[k]) < mod_ln_phi(phi, grid[k - 1]));
        }
    }
}

TEST_CASE("weight closed form") {
    CHECK(acharya_swamy_weight(0.0, 0.0) == 1.0);
    CHECK(acharya_swamy_weight(-1.0, 0.0) == 0.5);
    CHECK(acharya_swamy_weight(1.0, std::log(2.0)) == Approx(1.0).epsilon(1e-15));
    // tiny eta for Bose-Einstein goes through expm1 without cancellation
    CHECK(acharya_swamy_weight(1.0, 1e-12) == Approx(1e12).epsilon(1e-10));
    CHECK_ERROR(acharya_swamy_weight(1.0, -1e-3), RangeError);
}

}
