#include "phistat/entropy.hpp"

#include "phistat/error.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace phistat {

namespace {

void require_level(const EntropyFamily& f, double p) {
    if (!(p > 0.0) || !(p < f.occupation_ceiling())) {
        std::ostringstream os;
        os.precision(17);
        os << f.name() << ": occupation " << p << " outside (0, " << f.occupation_ceiling() << ")";
        fail(ErrorCode::DomainError, os.str());
    }
}

double x_log_x(double p) { return p * std::log(p); }

} // namespace

EntropyFamily EntropyFamily::epsilon(double eps) {
    if (!(eps >= -1.0 && eps <= 1.0)) fail(ErrorCode::InvalidArgument, "epsilon must lie in [-1, 1]");
    return {Kind::Epsilon, eps};
}

EntropyFamily EntropyFamily::haldane(double g) {
    if (!(g >= 0.0 && g <= 1.0)) fail(ErrorCode::InvalidArgument, "g must lie in [0, 1]");
    return {Kind::Haldane, g};
}

PhiFunction EntropyFamily::phi() const {
    switch (kind_) {
    case Kind::BGS: return PhiFunction::identity();
    case Kind::Epsilon: return PhiFunction::epsilon(parameter_);
    case Kind::Haldane: return PhiFunction::haldane(parameter_);
    }
    return PhiFunction::identity();
}

double EntropyFamily::occupation_ceiling() const noexcept {
    if (kind_ == Kind::Epsilon && parameter_ < 0.0) return -1.0 / parameter_;
    if (kind_ == Kind::Haldane && parameter_ > 0.0) return 1.0 / parameter_;
    return std::numeric_limits<double>::infinity();
}

std::string EntropyFamily::name() const {
    std::ostringstream os;
    os.precision(17);
    switch (kind_) {
    case Kind::BGS: os << "BGS"; break;
    case Kind::Epsilon: os << "Epsilon(" << parameter_ << ")"; break;
    case Kind::Haldane: os << "Haldane(" << parameter_ << ")"; break;
    }
    return os.str();
}

double level_entropy(const EntropyFamily& f, double p) {
    require_level(f, p);
    const double k = f.parameter();
    switch (f.kind()) {
    case EntropyFamily::Kind::BGS: return -x_log_x(p);
    case EntropyFamily::Kind::Epsilon:
        if (std::abs(k) < epsilon_series_crossover) return p + 0.5 * k * p * p - x_log_x(p);
        return (1.0 + k * p) * std::log1p(k * p) / k - x_log_x(p);
    case EntropyFamily::Kind::Haldane: {
        const double up = (1.0 - k) * p;
        const double down = -k * p;
        return (1.0 + up) * std::log1p(up) - (1.0 + down) * std::log1p(down) - x_log_x(p);
    }
    }
    return 0.0;
}

double level_gradient(const EntropyFamily& f, double p) {
    require_level(f, p);
    switch (f.kind()) {
    case EntropyFamily::Kind::BGS: return -std::log(p) - 1.0;
    case EntropyFamily::Kind::Epsilon:
    case EntropyFamily::Kind::Haldane: return mod_ln_phi(f.phi(), p);
    }
    return 0.0;
}

double level_hessian(const EntropyFamily& f, double p) {
    require_level(f, p);
    const double k = f.parameter();
    switch (f.kind()) {
    case EntropyFamily::Kind::BGS: return -1.0 / p;
    case EntropyFamily::Kind::Epsilon: return -1.0 / (p * (1.0 + k * p));
    case EntropyFamily::Kind::Haldane: {
        // d^2/dp^2 of the three terms separately
        const double g = k, h = 1.0 - k;
        return h * h / (1.0 + h * p) - g * g / (1.0 - g * p) - 1.0 / p;
    }
    }
    return 0.0;
}

double entropy_value(const EntropyFamily& f, std::span<const double> p) {
    double sum = 0.0;
    for (double x : p) sum += level_entropy(f, x);
    return sum;
}

double entropy_value(const EntropyFamily& f, const SimplexPoint& p) { return entropy_value(f, p.values()); }

std::vector<double> entropy_gradient(const EntropyFamily& f, std::span<const double> p) {
    std::vector<double> out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) out[i] = level_gradient(f, p[i]);
    return out;
}

std::vector<double> entropy_hessian(const EntropyFamily& f, std::span<const double> p) {
    std::vector<double> out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) out[i] = level_hessian(f, p[i]);
    return out;
}

double phi_entropy(const PhiFunction& phi, std::span<const double> p, const QuadratureConfig& cfg) {
    double sum = 0.0;
    for (double x : p) {
        if (!(x > 0.0)) fail(ErrorCode::DomainError, "phi_entropy: probabilities must be positive");
        sum += x * deduced_log(phi, 1.0 / x, cfg);
    }
    return sum;
}

double modified_phi_entropy(const PhiFunction& phi, std::span<const double> p, const QuadratureConfig& cfg) {
    if (!phi.superlinear())
        fail(ErrorCode::DivergentIntegral,
             "modified_phi_entropy: the outer integral to infinity diverges for this deformation");
    double sum = 0.0;
    for (double x : p) {
        if (!(x > 0.0)) fail(ErrorCode::DomainError, "modified_phi_entropy: probabilities must be positive");
        // v = 1/w maps v^-2 K(v) dv on [x, inf) to K(1/w) dw on (0, 1/x];
        // K(1/w) = int_0^{1/w} u/phi(u) du = chi_integral(w).
        auto outer = [&](double w) { return chi_integral(phi, w, cfg); };
        sum += x * integrate(outer, 0.0, 1.0 / x, cfg).value;
    }
    return sum;
}

} // namespace phistat
