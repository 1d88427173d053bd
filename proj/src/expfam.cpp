#include "phistat/expfam.hpp"

#include "phistat/error.hpp"
#include "phistat/phi.hpp"
#include "phistat/random.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace phistat {

namespace {

void require_positive(double p, const char* what) {
    if (!(p > 0.0) || !std::isfinite(p)) fail(ErrorCode::InvalidArgument, std::string(what) + ": p must be positive");
}

std::string str(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

bool is_count(double x) { return std::isfinite(x) && x >= 0.0 && x == std::floor(x); }

} // namespace

std::string_view to_string(ModelKind kind) noexcept {
    switch (kind) {
    case ModelKind::Categorical: return "categorical";
    case ModelKind::Bernoulli: return "bernoulli";
    case ModelKind::Geometric: return "geometric";
    case ModelKind::CurvedBernoulli: return "curved-bernoulli";
    case ModelKind::CurvedGeometric: return "curved-geometric";
    }
    return "unknown";
}

std::optional<ModelKind> parse_model_kind(std::string_view name) noexcept {
    for (ModelKind k : {ModelKind::Categorical, ModelKind::Bernoulli, ModelKind::Geometric, ModelKind::CurvedBernoulli,
                        ModelKind::CurvedGeometric})
        if (to_string(k) == name) return k;
    return std::nullopt;
}

OccupationModel::OccupationModel(ModelKind kind, double p, double eps) : kind_(kind), p_(p), eps_(eps) {}

bool OccupationModel::two_point() const noexcept {
    return kind_ == ModelKind::Bernoulli || kind_ == ModelKind::CurvedBernoulli;
}

bool OccupationModel::countable() const noexcept {
    return kind_ == ModelKind::Geometric || kind_ == ModelKind::CurvedGeometric;
}

OccupationModel OccupationModel::categorical(SimplexPoint p, EnergySpectrum levels) {
    if (p.size() != levels.size()) fail(ErrorCode::DimensionMismatch, "categorical: probabilities and levels differ in size");
    OccupationModel m(ModelKind::Categorical, 0.0, 0.0);
    m.probs_ = std::move(p);
    m.levels_ = std::move(levels);
    return m;
}

OccupationModel OccupationModel::bernoulli(double p) {
    if (!(p > 0.0 && p < 1.0)) fail(ErrorCode::InvalidArgument, "bernoulli: p must lie in (0, 1)");
    OccupationModel m(ModelKind::Bernoulli, p, -1.0);
    m.success_ = p;
    return m;
}

OccupationModel OccupationModel::geometric(double p) {
    require_positive(p, "geometric");
    OccupationModel m(ModelKind::Geometric, p, 1.0);
    m.ratio_ = p / (p + 1.0);
    return m;
}

OccupationModel OccupationModel::curved_bernoulli(double p, double eps) {
    require_positive(p, "curved-bernoulli");
    if (!(eps >= -1.0 && eps < 0.0)) fail(ErrorCode::InvalidArgument, "curved-bernoulli: eps must lie in [-1, 0)");
    if (!(1.0 + eps * p > 0.0))
        fail(ErrorCode::InvalidArgument, "curved-bernoulli: needs 1 + eps p > 0 so both masses are positive");
    OccupationModel m(ModelKind::CurvedBernoulli, p, eps);
    m.success_ = p / (1.0 + (1.0 + eps) * p);
    return m;
}

OccupationModel OccupationModel::curved_geometric(double p, double eps) {
    require_positive(p, "curved-geometric");
    if (!(eps > 0.0 && eps <= 1.0)) fail(ErrorCode::InvalidArgument, "curved-geometric: eps must lie in (0, 1]");
    if (!(1.0 + (eps - 1.0) * p > 0.0))
        fail(ErrorCode::InvalidArgument, "curved-geometric: needs 1 + (eps - 1) p > 0");
    OccupationModel m(ModelKind::CurvedGeometric, p, eps);
    m.ratio_ = p / (1.0 + eps * p);
    return m;
}

double log_mass(const OccupationModel& m, double x) {
    const double p = m.p(), eps = m.eps();
    switch (m.kind()) {
    case ModelKind::Categorical: {
        const auto levels = m.levels()->values();
        const auto it = std::find(levels.begin(), levels.end(), x);
        if (it == levels.end()) fail(ErrorCode::UnsupportedOutcome, "categorical: " + str(x) + " is not a level");
        return std::log((*m.probabilities())[static_cast<std::size_t>(it - levels.begin())]);
    }
    case ModelKind::Bernoulli:
        if (x != 0.0 && x != 1.0) fail(ErrorCode::UnsupportedOutcome, "bernoulli: outcome must be 0 or 1");
        return x * (std::log(p) - std::log1p(-p)) + std::log1p(-p);
    case ModelKind::CurvedBernoulli:
        if (x != 0.0 && x != 1.0) fail(ErrorCode::UnsupportedOutcome, "curved-bernoulli: outcome must be 0 or 1");
        return x * (std::log(p) - std::log1p(eps * p)) + std::log1p(eps * p) - std::log1p((1.0 + eps) * p);
    case ModelKind::Geometric:
    case ModelKind::CurvedGeometric:
        if (!is_count(x)) fail(ErrorCode::UnsupportedOutcome, std::string(to_string(m.kind())) + ": outcome must be a count");
        return x * (std::log(p) - std::log1p(eps * p)) + std::log1p((eps - 1.0) * p) - std::log1p(eps * p);
    }
    return 0.0;
}

std::vector<double> natural_parameter(const OccupationModel& m) {
    const double p = m.p();
    switch (m.kind()) {
    case ModelKind::Categorical: {
        std::vector<double> eta;
        for (double x : m.probabilities()->values()) eta.push_back(std::log(x));
        return eta;
    }
    case ModelKind::Bernoulli: return {std::log(p) - std::log1p(-p)};
    case ModelKind::Geometric: return {std::log(p) - std::log1p(p)};
    case ModelKind::CurvedBernoulli:
    case ModelKind::CurvedGeometric: return {std::log(p) - std::log1p(m.eps() * p)};
    }
    return {};
}

double natural_parameter_inverse(ModelKind kind, std::optional<double> eps, double eta) {
    switch (kind) {
    case ModelKind::Categorical: return std::exp(eta);
    case ModelKind::Bernoulli: return acharya_swamy_weight(-1.0, -eta);
    case ModelKind::Geometric: return acharya_swamy_weight(1.0, -eta);
    case ModelKind::CurvedBernoulli:
        if (!eps || !(*eps >= -1.0 && *eps < 0.0))
            fail(ErrorCode::InvalidArgument, "curved-bernoulli inverse needs eps in [-1, 0)");
        return acharya_swamy_weight(*eps, -eta);
    case ModelKind::CurvedGeometric:
        if (!eps || !(*eps > 0.0 && *eps <= 1.0))
            fail(ErrorCode::InvalidArgument, "curved-geometric inverse needs eps in (0, 1]");
        return acharya_swamy_weight(*eps, -eta);
    }
    return 0.0;
}

double exact_mean(const OccupationModel& m) {
    switch (m.kind()) {
    case ModelKind::Categorical: return mean_energy(*m.probabilities(), *m.levels());
    case ModelKind::Bernoulli:
    case ModelKind::CurvedBernoulli: return m.success_mass();
    case ModelKind::Geometric:
    case ModelKind::CurvedGeometric: return m.ratio() / (1.0 - m.ratio());
    }
    return 0.0;
}

double exact_variance(const OccupationModel& m) {
    switch (m.kind()) {
    case ModelKind::Categorical: {
        const double mu = exact_mean(m);
        double v = 0.0;
        for (std::size_t i = 0; i < m.levels()->size(); ++i) {
            const double d = (*m.levels())[i] - mu;
            v += (*m.probabilities())[i] * d * d;
        }
        return v;
    }
    case ModelKind::Bernoulli:
    case ModelKind::CurvedBernoulli: return m.success_mass() * (1.0 - m.success_mass());
    case ModelKind::Geometric:
    case ModelKind::CurvedGeometric: {
        const double q = m.ratio();
        return q / ((1.0 - q) * (1.0 - q));
    }
    }
    return 0.0;
}

double normalization_check(const OccupationModel& m, double tail_tol) {
    if (!(tail_tol > 0.0)) fail(ErrorCode::InvalidArgument, "tail tolerance must be positive");
    double total = 0.0, carry = 0.0;
    auto add = [&](double x) {
        const double t = total + x;
        carry += std::abs(total) >= std::abs(x) ? (total - t) + x : (x - t) + total;
        total = t;
    };
    switch (m.kind()) {
    case ModelKind::Categorical:
        for (double x : m.levels()->values()) add(std::exp(log_mass(m, x)));
        break;
    case ModelKind::Bernoulli:
    case ModelKind::CurvedBernoulli:
        add(std::exp(log_mass(m, 0.0)));
        add(std::exp(log_mass(m, 1.0)));
        break;
    case ModelKind::Geometric:
    case ModelKind::CurvedGeometric: {
        const double log_q = std::log(m.ratio());
        // smallest N with q^(N+1) < tail_tol
        const double last = std::max(0.0, std::ceil(std::log(tail_tol) / log_q) - 1.0);
        const auto n_max = static_cast<std::size_t>(last);
        for (std::size_t k = 0; k <= n_max; ++k) add(std::exp(log_mass(m, static_cast<double>(k))));
        add(std::exp(static_cast<double>(n_max + 1) * log_q));
        break;
    }
    }
    return std::abs(total + carry - 1.0);
}

SampleStats sample(const OccupationModel& m, std::size_t n, std::uint64_t seed) {
    if (n < 1) fail(ErrorCode::InvalidArgument, "sample: need at least one draw");
    Rng rng(seed);
    std::vector<double> cumulative;
    if (m.kind() == ModelKind::Categorical) {
        double acc = 0.0;
        for (double x : m.probabilities()->values()) cumulative.push_back(acc += x);
    }
    const double log_q = m.countable() ? std::log(m.ratio()) : 0.0;

    double mean = 0.0, m2 = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
        const double u = rng.uniform();
        double x = 0.0;
        switch (m.kind()) {
        case ModelKind::Categorical: {
            const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u * cumulative.back());
            const auto idx = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), cumulative.size() - 1);
            x = (*m.levels())[idx];
            break;
        }
        case ModelKind::Bernoulli:
        case ModelKind::CurvedBernoulli: x = u < m.success_mass() ? 1.0 : 0.0; break;
        case ModelKind::Geometric:
        case ModelKind::CurvedGeometric:
            // P(X >= j) = q^j
            x = std::floor(std::log1p(-u) / log_q);
            break;
        }
        const double delta = x - mean;
        mean += delta / static_cast<double>(k);
        m2 += delta * (x - mean);
    }
    return {n, mean, n > 1 ? m2 / static_cast<double>(n - 1) : 0.0, seed};
}

std::string sample_stats_to_json(const SampleStats& s) {
    nlohmann::json doc;
    doc["count"] = s.count;
    doc["mean"] = s.mean;
    doc["variance"] = s.variance;
    doc["seed"] = s.seed;
    return doc.dump();
}

} // namespace phistat
