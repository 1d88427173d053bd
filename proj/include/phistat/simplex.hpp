#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace phistat {

inline constexpr double simplex_sum_tolerance = 1e-12;

// A point of the open simplex: n >= 2, every entry > 0, |sum - 1| <= 1e-12.
class SimplexPoint {
public:
    std::span<const double> values() const noexcept { return p_; }
    std::size_t size() const noexcept { return p_.size(); }
    double operator[](std::size_t i) const { return p_[i]; }

private:
    friend SimplexPoint validate(std::span<const double> p);
    explicit SimplexPoint(std::vector<double> p) : p_(std::move(p)) {}
    std::vector<double> p_;
};

SimplexPoint validate(std::span<const double> p);

// Strictly increasing, finite, at least two levels.
class EnergySpectrum {
public:
    static EnergySpectrum create(std::vector<double> energies);

    std::span<const double> values() const noexcept { return e_; }
    std::size_t size() const noexcept { return e_.size(); }
    double operator[](std::size_t i) const { return e_[i]; }
    double lowest() const noexcept { return e_.front(); }
    double highest() const noexcept { return e_.back(); }

private:
    explicit EnergySpectrum(std::vector<double> e) : e_(std::move(e)) {}
    std::vector<double> e_;
};

struct MomentConstraint {
    EnergySpectrum spectrum;
    double mean_energy;

    bool interior() const noexcept {
        return mean_energy > spectrum.lowest() && mean_energy < spectrum.highest();
    }
};

double mean_energy(std::span<const double> p, std::span<const double> energies);
double mean_energy(const SimplexPoint& p, const EnergySpectrum& spectrum);

// Mean energy of the Boltzmann point p_i ~ exp(-b E_i). Strictly decreasing in b.
double boltzmann_mean(const EnergySpectrum& spectrum, double b);

/// An interior point of the constrained simplex: the Boltzmann point whose
/// b is found by bisection on boltzmann_mean. InfeasibleConstraint unless
/// E_1 < mean < E_n.
SimplexPoint feasible_point(const MomentConstraint& c);

/// {"energies": [...], "mean_energy": x}
MomentConstraint constraint_from_json(std::string_view text);
std::string constraint_to_json(const MomentConstraint& c);

} // namespace phistat
