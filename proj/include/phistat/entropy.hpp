#pragma once

#include "phistat/numerics.hpp"
#include "phistat/phi.hpp"
#include "phistat/simplex.hpp"

#include <span>
#include <string>
#include <vector>

namespace phistat {

/// Entropy families with closed forms, summed per level:
///   BGS          -p ln p
///   Epsilon(e)   (1 + e p) ln(1 + e p) / e - p ln p      (e = 0: p - p ln p)
///   Haldane(g)   (1 + (1-g) p) ln(1 + (1-g) p) - (1 - g p) ln(1 - g p) - p ln p
/// Epsilon(1) and Haldane(0) are the Bose-Einstein entropy, Epsilon(-1) and
/// Haldane(1) the Fermi-Dirac one.
class EntropyFamily {
public:
    enum class Kind { BGS, Epsilon, Haldane };

    static EntropyFamily bgs() { return {Kind::BGS, 0.0}; }
    static EntropyFamily epsilon(double eps);
    static EntropyFamily haldane(double g);

    Kind kind() const noexcept { return kind_; }
    double parameter() const noexcept { return parameter_; }

    // The deformation whose -1/phi is this family's Hessian diagonal.
    PhiFunction phi() const;
    // Upper end of the per-level domain (1 for Fermi-Dirac, 1/g for Haldane).
    double occupation_ceiling() const noexcept;
    std::string name() const;

private:
    EntropyFamily(Kind kind, double parameter) : kind_(kind), parameter_(parameter) {}
    Kind kind_;
    double parameter_;
};

// Below this |eps| the Epsilon family switches to its series p + eps p^2 / 2.
inline constexpr double epsilon_series_crossover = 1e-8;

double level_entropy(const EntropyFamily& f, double p);
double level_gradient(const EntropyFamily& f, double p);
double level_hessian(const EntropyFamily& f, double p);

double entropy_value(const EntropyFamily& f, std::span<const double> p);
double entropy_value(const EntropyFamily& f, const SimplexPoint& p);
std::vector<double> entropy_gradient(const EntropyFamily& f, std::span<const double> p);
// Diagonal of the Hessian; off-diagonal entries vanish identically.
std::vector<double> entropy_hessian(const EntropyFamily& f, std::span<const double> p);

/// sum_i p_i omega_phi(1 / p_i), the deduced logarithm playing ln_chi.
double phi_entropy(const PhiFunction& phi, std::span<const double> p, const QuadratureConfig& cfg = {});

/// sum_i p_i int_{p_i}^inf v^-2 [int_0^v u / phi(u) du] dv. Converges only
/// when phi is defined on all of (0, inf) and grows faster than linearly;
/// DivergentIntegral otherwise (Identity, eps <= 0, g > 0).
double modified_phi_entropy(const PhiFunction& phi, std::span<const double> p, const QuadratureConfig& cfg = {});

} // namespace phistat
