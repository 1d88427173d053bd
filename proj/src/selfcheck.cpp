#include "phistat/selfcheck.hpp"

#include "phistat/entropy.hpp"
#include "phistat/error.hpp"
#include "phistat/expfam.hpp"
#include "phistat/maxent.hpp"
#include "phistat/phi.hpp"
#include "phistat/random.hpp"
#include "phistat/wu.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <functional>

namespace phistat {

namespace {

double relative(double got, double want) { return std::abs(got - want) / std::max(1.0, std::abs(want)); }

std::vector<double> random_simplex(Rng& rng, std::size_t n) {
    std::vector<double> p(n);
    double total = 0.0;
    for (auto& x : p) total += (x = 0.05 + rng.uniform());
    for (auto& x : p) x /= total;
    return p;
}

class Battery {
public:
    explicit Battery(SelfCheckReport& report) : report_(report) {}

    void run(const std::string& name, double tolerance, const std::function<double()>& measure) {
        CheckResult r{name, 0.0, tolerance, false, {}};
        try {
            r.measured = measure();
            r.passed = std::isfinite(r.measured) && r.measured <= tolerance;
        } catch (const std::exception& e) {
            r.measured = std::numeric_limits<double>::infinity();
            r.detail = e.what();
        }
        report_.checks.push_back(std::move(r));
    }

private:
    SelfCheckReport& report_;
};

} // namespace

bool SelfCheckReport::passed() const noexcept {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

SelfCheckReport run_self_check(const QuadratureConfig& cfg, std::uint64_t seed) {
    SelfCheckReport report;
    Battery battery(report);
    const double quad_tol = std::max(1e-6, 10.0 * std::max(cfg.abs_tol(), cfg.rel_tol()));

    battery.run("modified entropy eps=1 vs Bose-Einstein", quad_tol, [&] {
        Rng rng(seed);
        const auto be = EntropyFamily::epsilon(1.0);
        double worst = 0.0;
        for (int k = 0; k < 5; ++k) {
            const auto p = random_simplex(rng, 2 + static_cast<std::size_t>(k));
            worst = std::max(worst, std::abs(modified_phi_entropy(PhiFunction::epsilon(1.0), p, cfg) - entropy_value(be, p)));
        }
        return worst;
    });

    battery.run("modified entropy shift eps=0.5", quad_tol, [&] {
        const std::vector<double> p{0.2, 0.3, 0.5};
        const double shifted = modified_phi_entropy(PhiFunction::epsilon(0.5), p, cfg);
        return std::abs(shifted - entropy_value(EntropyFamily::epsilon(0.5), p) - std::log(2.0));
    });

    battery.run("modified log round trip", 1e-12, [&] {
        double worst = 0.0;
        for (double eps : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
            const auto phi = PhiFunction::epsilon(eps);
            for (double u : {1e-3, 0.1, 0.5, 0.9, 3.0, 40.0}) {
                if (!phi.contains(u)) continue;
                worst = std::max(worst, std::abs(mod_exp_phi(phi, mod_ln_phi(phi, u), cfg) - u) / u);
            }
        }
        for (double g : {0.1, 0.5, 0.9}) {
            const auto phi = PhiFunction::haldane(g);
            for (double u : {1e-2, 0.3, 0.9}) worst = std::max(worst, std::abs(mod_exp_phi(phi, mod_ln_phi(phi, u), cfg) - u) / u);
        }
        return worst;
    });

    battery.run("phi-exponential round trip", 1e-10, [&] {
        double worst = 0.0;
        for (const auto& phi : {PhiFunction::epsilon(0.5), PhiFunction::epsilon(-0.5), PhiFunction::haldane(0.3)})
            for (double u : {0.05, 0.5, 1.5})
                worst = std::max(worst, std::abs(exp_phi(phi, ln_phi(phi, u, cfg), cfg) - u) / u);
        return worst;
    });

    battery.run("deduced log equals chi-logarithm", quad_tol, [&] {
        double worst = 0.0;
        const auto phi = PhiFunction::epsilon(1.0);
        for (double u : {0.5, 2.0, 5.0}) worst = std::max(worst, std::abs(deduced_log(phi, u, cfg) - ln_chi(phi, u, cfg)));
        return worst;
    });

    battery.run("Wu equation residual", 1e-10, [&] {
        double worst = 0.0;
        for (int gi = 1; gi <= 9; ++gi) {
            const double g = gi / 10.0;
            for (int k = -20; k <= 20; ++k) {
                const double eta = k / 4.0;
                const double w = wu_omega({g, eta}, cfg);
                const double lhs = std::exp(g * std::log(w) + (1.0 - g) * std::log1p(w));
                worst = std::max(worst, std::abs(lhs - std::exp(eta)) / std::exp(eta));
            }
        }
        return worst;
    });

    battery.run("Wu g=1/2 closed form vs iteration", 1e-12, [&] {
        double worst = 0.0;
        for (int k = -20; k <= 20; ++k) {
            const double eta = k / 4.0;
            const double closed = wu_omega({0.5, eta}, cfg);
            worst = std::max(worst, relative(wu_omega_iterative({0.5, eta}, cfg), closed));
        }
        return worst;
    });

    battery.run("weight function vs modified exponential", 1e-12, [&] {
        double worst = 0.0;
        for (double eps : {-1.0, -0.5, 0.0, 0.5, 1.0})
            for (double eta : {-2.0, 0.5, 1.0, 3.0}) {
                if (std::exp(eta) <= eps) continue;
                const double w = weight_at(EntropyFamily::epsilon(eps), eta, cfg);
                worst = std::max(worst, relative(mod_exp_phi(PhiFunction::epsilon(eps), eta, cfg), w));
            }
        return worst;
    });

    battery.run("closed-form vs numeric maximizer", 1e-7, [&] {
        double worst = 0.0;
        const auto spectrum = EnergySpectrum::create({0.0, 0.7, 1.3, 2.0});
        for (double eps : {-1.0, 0.0, 1.0}) {
            const MaxEntProblem prob{{spectrum, 0.8}, EntropyFamily::epsilon(eps)};
            const auto closed = solve_closed_form(prob, cfg);
            const auto numeric = solve_numeric(prob);
            for (std::size_t i = 0; i < spectrum.size(); ++i) worst = std::max(worst, std::abs(closed.p[i] - numeric.p[i]));
        }
        return worst;
    });

    battery.run("maximum verification violations", 0.0, [&] {
        double failures = 0.0;
        const auto spectrum = EnergySpectrum::create({0.0, 0.5, 1.5, 2.0, 3.0});
        for (const auto& family : {EntropyFamily::epsilon(1.0), EntropyFamily::epsilon(-1.0), EntropyFamily::haldane(0.4)}) {
            const MaxEntProblem prob{{spectrum, 1.1}, family};
            if (!inspect_maximum(solve_closed_form(prob, cfg), prob, seed).passed()) failures += 1.0;
        }
        return failures;
    });

    battery.run("normalization residual", 1e-12, [&] {
        double worst = 0.0;
        for (const auto& m : {OccupationModel::bernoulli(0.3), OccupationModel::geometric(2.0),
                              OccupationModel::curved_bernoulli(0.8, -0.5), OccupationModel::curved_geometric(0.7, 0.5)})
            worst = std::max(worst, normalization_check(m));
        return worst;
    });

    battery.run("sampler mean in standard errors", 4.0, [&] {
        double worst = 0.0;
        std::uint64_t s = seed;
        for (const auto& m : {OccupationModel::bernoulli(0.5), OccupationModel::geometric(1.0),
                              OccupationModel::curved_bernoulli(0.5, -0.5), OccupationModel::curved_geometric(0.7, 0.5)}) {
            const std::size_t n = 100000;
            const auto stats = sample(m, n, ++s);
            const double se = std::sqrt(exact_variance(m) / static_cast<double>(n));
            worst = std::max(worst, std::abs(stats.mean - exact_mean(m)) / se);
        }
        return worst;
    });

    return report;
}

std::string self_check_to_json(const SelfCheckReport& report) {
    nlohmann::json doc;
    doc["passed"] = report.passed();
    doc["checks"] = nlohmann::json::array();
    for (const auto& c : report.checks) {
        nlohmann::json entry{{"name", c.name}, {"passed", c.passed}, {"tolerance", c.tolerance}};
        entry["measured"] = std::isfinite(c.measured) ? nlohmann::json(c.measured) : nlohmann::json(nullptr);
        if (!c.detail.empty()) entry["detail"] = c.detail;
        doc["checks"].push_back(std::move(entry));
    }
    return doc.dump();
}

} // namespace phistat
