#pragma once

#include "phistat/numerics.hpp"

namespace phistat {

// Fractional exclusion statistics: omega^g (1 + omega)^(1-g) = e^eta,
// occupation weight 1 / (omega + g).
struct WuQuery {
    double g;    // in [0, 1]
    double eta;  // finite
};

/// Unique positive root of g ln(omega) + (1-g) ln(1+omega) = eta.
/// Closed forms for g in {0, 1/2, 1}; otherwise wu_omega_iterative.
/// g = 0 needs eta > 0 (NoPositiveRoot otherwise).
double wu_omega(const WuQuery& q, const QuadratureConfig& cfg = {});

/// The general solver: Newton in log(omega) with a bisection safeguard inside
/// the exact bracket [eta - (1-g) ln(1 + e^-eta) / g, eta]. Requires g > 0.
double wu_omega_iterative(const WuQuery& q, const QuadratureConfig& cfg = {});

double wu_weight(const WuQuery& q, const QuadratureConfig& cfg = {});

/// |(1 + (1-g) p)^(1-g) (1 - g p)^g / p - e^eta|, zero exactly at p = wu_weight.
double wu_stationarity_check(double g, double p, double eta);

} // namespace phistat
