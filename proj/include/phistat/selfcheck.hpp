#pragma once

#include "phistat/numerics.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace phistat {

struct CheckResult {
    std::string name;
    double measured = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    std::string detail;  // exception text when the check could not run
};

struct SelfCheckReport {
    std::vector<CheckResult> checks;

    bool passed() const noexcept;
};

inline constexpr std::uint64_t default_self_check_seed = 20240101;

/// Built-in consistency battery: quadrature against closed-form entropies,
/// logarithm round trips, the deduced-log identity, Wu residuals, weight
/// paths, solver cross-validation and sampler moments. Quadrature-backed
/// checks scale their tolerance with the integration tolerances in cfg.
SelfCheckReport run_self_check(const QuadratureConfig& cfg = {}, std::uint64_t seed = default_self_check_seed);

std::string self_check_to_json(const SelfCheckReport& report);

} // namespace phistat
