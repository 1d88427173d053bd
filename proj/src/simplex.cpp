#include "phistat/simplex.hpp"

#include "phistat/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace phistat {

namespace {

// Neumaier-compensated sum.
double stable_sum(std::span<const double> xs) {
    double sum = 0.0, carry = 0.0;
    for (double x : xs) {
        const double t = sum + x;
        carry += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
        sum = t;
    }
    return sum + carry;
}

std::vector<double> boltzmann_weights(const EnergySpectrum& spectrum, double b) {
    const auto e = spectrum.values();
    // Shift by the largest exponent so the biggest weight is exactly 1.
    const double shift = b >= 0.0 ? -b * spectrum.lowest() : -b * spectrum.highest();
    std::vector<double> w(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) w[i] = std::exp(-b * e[i] - shift);
    const double total = stable_sum(w);
    for (double& x : w) x /= total;
    return w;
}

} // namespace

SimplexPoint validate(std::span<const double> p) {
    if (p.size() < 2) fail(ErrorCode::InvalidSimplexPoint, "a simplex point needs at least two entries");
    for (std::size_t i = 0; i < p.size(); ++i)
        if (!(p[i] > 0.0) || !std::isfinite(p[i])) {
            std::ostringstream os;
            os << "entry " << i << " = " << p[i] << " is not strictly positive";
            fail(ErrorCode::InvalidSimplexPoint, os.str());
        }
    const double total = stable_sum(p);
    if (std::abs(total - 1.0) > simplex_sum_tolerance) {
        std::ostringstream os;
        os.precision(17);
        os << "entries sum to " << total;
        fail(ErrorCode::InvalidSimplexPoint, os.str());
    }
    return SimplexPoint(std::vector<double>(p.begin(), p.end()));
}

EnergySpectrum EnergySpectrum::create(std::vector<double> energies) {
    if (energies.size() < 2) fail(ErrorCode::InvalidArgument, "an energy spectrum needs at least two levels");
    for (std::size_t i = 0; i < energies.size(); ++i) {
        if (!std::isfinite(energies[i])) fail(ErrorCode::InvalidArgument, "energies must be finite");
        if (i > 0 && !(energies[i] > energies[i - 1]))
            fail(ErrorCode::InvalidArgument, "energies must be strictly increasing");
    }
    return EnergySpectrum(std::move(energies));
}

double mean_energy(std::span<const double> p, std::span<const double> energies) {
    if (p.size() != energies.size()) {
        std::ostringstream os;
        os << p.size() << " probabilities against " << energies.size() << " energy levels";
        fail(ErrorCode::DimensionMismatch, os.str());
    }
    std::vector<double> terms(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) terms[i] = p[i] * energies[i];
    return stable_sum(terms);
}

double mean_energy(const SimplexPoint& p, const EnergySpectrum& spectrum) {
    return mean_energy(p.values(), spectrum.values());
}

double boltzmann_mean(const EnergySpectrum& spectrum, double b) {
    return mean_energy(boltzmann_weights(spectrum, b), spectrum.values());
}

SimplexPoint feasible_point(const MomentConstraint& c) {
    if (!c.interior()) {
        std::ostringstream os;
        os << "infeasible: mean energy " << c.mean_energy << " is not strictly inside (" << c.spectrum.lowest()
           << ", " << c.spectrum.highest() << ")";
        fail(ErrorCode::InfeasibleConstraint, os.str());
    }
    const double spread = c.spectrum.highest() - c.spectrum.lowest();
    double lo = -1.0 / spread, hi = 1.0 / spread;
    for (int i = 0; boltzmann_mean(c.spectrum, lo) < c.mean_energy; ++i) {
        if (i > 2000) fail(ErrorCode::ConvergenceError, "feasible_point: cannot bracket b from below");
        lo *= 2.0;
    }
    for (int i = 0; boltzmann_mean(c.spectrum, hi) > c.mean_energy; ++i) {
        if (i > 2000) fail(ErrorCode::ConvergenceError, "feasible_point: cannot bracket b from above");
        hi *= 2.0;
    }
    for (int i = 0; i < 400; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) break;
        const double m = boltzmann_mean(c.spectrum, mid);
        if (m == c.mean_energy) {
            lo = hi = mid;
            break;
        }
        (m > c.mean_energy ? lo : hi) = mid;
    }
    const double b = 0.5 * (lo + hi);
    return validate(boltzmann_weights(c.spectrum, b));
}

MomentConstraint constraint_from_json(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        fail(ErrorCode::InvalidArgument, std::string("spectrum document is not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("energies") || !doc["energies"].is_array())
        fail(ErrorCode::InvalidArgument, "spectrum document needs an \"energies\" array");
    if (!doc.contains("mean_energy") || !doc["mean_energy"].is_number())
        fail(ErrorCode::InvalidArgument, "spectrum document needs a numeric \"mean_energy\"");
    std::vector<double> energies;
    for (const auto& e : doc["energies"]) {
        if (!e.is_number()) fail(ErrorCode::InvalidArgument, "energies must be numbers");
        energies.push_back(e.get<double>());
    }
    return {EnergySpectrum::create(std::move(energies)), doc["mean_energy"].get<double>()};
}

std::string constraint_to_json(const MomentConstraint& c) {
    nlohmann::json doc;
    doc["energies"] = std::vector<double>(c.spectrum.values().begin(), c.spectrum.values().end());
    doc["mean_energy"] = c.mean_energy;
    return doc.dump();
}

} // namespace phistat
