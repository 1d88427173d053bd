#include "support.hpp"

#include "phistat/random.hpp"
#include "phistat/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

using namespace phistat;
using doctest::Approx;

TEST_SUITE("simplex") {

TEST_CASE("validate") {
    CHECK(validate(std::vector{0.5, 0.5}).size() == 2);
    CHECK(validate(std::vector{0.2, 0.3, 0.5})[2] == 0.5);
    CHECK_ERROR(validate(std::vector{0.6, 0.6}), InvalidSimplexPoint);
    CHECK_ERROR(validate(std::vector{1.0}), InvalidSimplexPoint);
    CHECK_ERROR(validate(std::vector{1.5, -0.5}), InvalidSimplexPoint);
    CHECK_ERROR(validate(std::vector{1.0, 0.0}), InvalidSimplexPoint);
    CHECK_ERROR(validate(std::vector<double>{0.5, NAN}), InvalidSimplexPoint);
    CHECK_ERROR(validate(std::vector{0.5, 0.5 + 1e-11}), InvalidSimplexPoint);
    CHECK(validate(std::vector{0.5, 0.5 + 1e-13}).size() == 2);
}

TEST_CASE("energy spectrum") {
    CHECK(EnergySpectrum::create({0.0, 1.0}).highest() == 1.0);
    CHECK_ERROR(EnergySpectrum::create({0.0}), InvalidArgument);
    CHECK_ERROR(EnergySpectrum::create({0.0, 0.0}), InvalidArgument);
    CHECK_ERROR(EnergySpectrum::create({1.0, 0.0}), InvalidArgument);
    CHECK_ERROR(EnergySpectrum::create({0.0, INFINITY}), InvalidArgument);
}

TEST_CASE("mean energy") {
    CHECK(mean_energy(validate(std::vector{0.5, 0.5}), EnergySpectrum::create({0.0, 1.0})) == 0.5);
    CHECK(mean_energy(std::vector{1.0 / 3, 1.0 / 3, 1.0 / 3}, std::vector{0.0, 1.0, 2.0}) == Approx(1.0).epsilon(1e-15));
    CHECK(mean_energy(validate(std::vector{0.25, 0.75}), EnergySpectrum::create({-1.0, 1.0})) == 0.5);
    CHECK_ERROR(mean_energy(std::vector{0.5, 0.5}, std::vector{0.0, 1.0, 2.0}), DimensionMismatch);
}

TEST_CASE("feasible point examples") {
    const auto two = feasible_point({EnergySpectrum::create({0.0, 1.0}), 0.5});
    CHECK(two[0] == Approx(0.5).epsilon(1e-14));
    CHECK(two[1] == Approx(0.5).epsilon(1e-14));
    const auto three = feasible_point({EnergySpectrum::create({0.0, 1.0, 2.0}), 1.0});
    double total = 0.0;
    for (double x : three.values()) total += x;
    CHECK(std::abs(total - 1.0) <= 1e-12);
    CHECK(std::abs(mean_energy(three.values(), std::vector{0.0, 1.0, 2.0}) - 1.0) <= 1e-10);
    CHECK_ERROR(feasible_point({EnergySpectrum::create({0.0, 1.0}), 1.0}), InfeasibleConstraint);
    CHECK_ERROR(feasible_point({EnergySpectrum::create({0.0, 1.0}), -0.1}), InfeasibleConstraint);
}

TEST_CASE("feasible points on random spectra reproduce the target") {
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform() * 7);
        std::vector<double> e(n);
        for (auto& x : e) x = -5.0 + 10.0 * rng.uniform();
        std::sort(e.begin(), e.end());
        const auto spectrum = EnergySpectrum::create(e);
        const double mean = e.front() + (0.02 + 0.96 * rng.uniform()) * (e.back() - e.front());
        const auto p = feasible_point({spectrum, mean});
        CHECK(std::abs(mean_energy(p, spectrum) - mean) <= 1e-10);
    }
}

TEST_CASE("Boltzmann mean decreases in b") {
    Rng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform() * 7);
        std::vector<double> e(n);
        for (auto& x : e) x = 3.0 * rng.normal();
        std::sort(e.begin(), e.end());
        const auto spectrum = EnergySpectrum::create(e);
        double previous = INFINITY;
        for (double b = -4.0; b <= 4.0; b += 0.25) {
            const double m = boltzmann_mean(spectrum, b);
            CHECK(m < previous);
            previous = m;
        }
    }
}

TEST_CASE("constraint JSON") {
    const auto c = constraint_from_json(R"({"energies": [0, 1, 2.5], "mean_energy": 1.25})");
    CHECK(c.spectrum.size() == 3);
    CHECK(c.mean_energy == 1.25);
    const auto again = constraint_from_json(constraint_to_json(c));
    CHECK(again.spectrum[2] == 2.5);
    CHECK(again.mean_energy == 1.25);
    CHECK_ERROR(constraint_from_json("{"), InvalidArgument);
    CHECK_ERROR(constraint_from_json(R"({"energies": [0, 1]})"), InvalidArgument);
    CHECK_ERROR(constraint_from_json(R"({"energies": [1, 0], "mean_energy": 0.5})"), InvalidArgument);
}

}
