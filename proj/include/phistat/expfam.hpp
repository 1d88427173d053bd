#pragma once

#include "phistat/simplex.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace phistat {

enum class ModelKind { Categorical, Bernoulli, Geometric, CurvedBernoulli, CurvedGeometric };

std::string_view to_string(ModelKind kind) noexcept;
std::optional<ModelKind> parse_model_kind(std::string_view name) noexcept;

/// Occupation-number distributions whose natural parameters invert to the
/// weight functions.
///
///   Categorical(p, E)        P(E_i) = p_i
///   Bernoulli(p)             P(1) = p, P(0) = 1 - p
///   Geometric(p)             P(n) = p^n / (p + 1)^(n+1)
///   CurvedBernoulli(p, e)    P(1) = p / (1 + (1+e) p), P(0) = (1 + e p) / (1 + (1+e) p),  e in [-1, 0)
///   CurvedGeometric(p, e)    P(n) = r^n / s^(n+1), r = p / (1 + (e-1) p), s = r + 1,     e in (0, 1]
class OccupationModel {
public:
    static OccupationModel categorical(SimplexPoint p, EnergySpectrum levels);
    static OccupationModel bernoulli(double p);
    static OccupationModel geometric(double p);
    static OccupationModel curved_bernoulli(double p, double eps);
    static OccupationModel curved_geometric(double p, double eps);

    ModelKind kind() const noexcept { return kind_; }
    double p() const noexcept { return p_; }
    double eps() const noexcept { return eps_; }
    const std::optional<SimplexPoint>& probabilities() const noexcept { return probs_; }
    const std::optional<EnergySpectrum>& levels() const noexcept { return levels_; }

    bool two_point() const noexcept;
    bool countable() const noexcept;
    // P(X = 1) for the two-point families.
    double success_mass() const noexcept { return success_; }
    // P(X >= n+1) / P(X >= n) for the geometric-type families.
    double ratio() const noexcept { return ratio_; }

private:
    OccupationModel(ModelKind kind, double p, double eps);

    ModelKind kind_;
    double p_ = 0.0;
    double eps_ = 0.0;
    double success_ = 0.0;
    double ratio_ = 0.0;
    std::optional<SimplexPoint> probs_;
    std::optional<EnergySpectrum> levels_;
};

struct SampleStats {
    std::size_t count = 0;
    double mean = 0.0;
    double variance = 0.0;  // unbiased; zero for a single draw
    std::uint64_t seed = 0;
};

double log_mass(const OccupationModel& m, double x);

/// ln p_i per level for Categorical, otherwise a single value:
/// Bernoulli ln(p/(1-p)), Geometric ln(p/(p+1)), curved families ln(p/(1+e p)).
std::vector<double> natural_parameter(const OccupationModel& m);

/// Parameter p whose natural parameter is eta. Categorical gives e^eta;
/// every other family 1 / (e^-eta - e) with e = -1 (Bernoulli), +1 (Geometric)
/// or the supplied value. RangeError when the denominator is not positive.
double natural_parameter_inverse(ModelKind kind, std::optional<double> eps, double eta);

double exact_mean(const OccupationModel& m);
double exact_variance(const OccupationModel& m);

/// |total mass - 1|. Countable supports are summed up to the first N whose
/// analytic tail ratio^(N+1) drops below tail_tol, then the tail is added
/// in closed form.
double normalization_check(const OccupationModel& m, double tail_tol = 1e-17);

// Inverse-transform sampling from a generator seeded with seed; local to the call.
SampleStats sample(const OccupationModel& m, std::size_t n, std::uint64_t seed);

std::string sample_stats_to_json(const SampleStats& s);

} // namespace phistat
