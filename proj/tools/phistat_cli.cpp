#include "phistat/phistat.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace {

using nlohmann::json;

// Raised for failures reported by the library; carries its status.
struct LibraryFailure : std::runtime_error {
    LibraryFailure(phistat_status s, const std::string& context)
        : std::runtime_error(context.empty() ? std::string(phistat_last_error())
                                             : context + ": " + phistat_last_error()),
          status(s) {}
    phistat_status status;
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void check(phistat_status s, const std::string& context = {}) {
    if (s != PHISTAT_OK) throw LibraryFailure(s, context);
}

template <class T, void (*Destroy)(T*)>
struct Deleter {
    void operator()(T* p) const { Destroy(p); }
};
using ConfigPtr = std::unique_ptr<phistat_config, Deleter<phistat_config, phistat_config_destroy>>;
using ProblemPtr = std::unique_ptr<phistat_problem, Deleter<phistat_problem, phistat_problem_destroy>>;
using SolutionPtr = std::unique_ptr<phistat_solution, Deleter<phistat_solution, phistat_solution_destroy>>;
using ModelPtr = std::unique_ptr<phistat_model, Deleter<phistat_model, phistat_model_destroy>>;
using StringPtr = std::unique_ptr<char, Deleter<char, phistat_string_free>>;

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

double parse_number(const std::string& text) {
    const std::string t = text.substr(text.find_first_not_of(" \t") == std::string::npos ? 0 : text.find_first_not_of(" \t"));
    double x = 0.0;
    const auto* end = t.data() + t.size();
    const auto r = std::from_chars(t.data(), end, x);
    if (r.ec != std::errc() || r.ptr != end) throw UsageError("not a number: '" + text + "'");
    return x;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string part;
    std::istringstream in(text);
    while (std::getline(in, part, sep)) parts.push_back(part);
    return parts;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// "x1,x2,..." or "lo:hi:steps" (steps + 1 points including both ends).
std::vector<double> parse_grid(const std::string& text) {
    if (text.find(':') != std::string::npos) {
        const auto parts = split(text, ':');
        if (parts.size() != 3) throw UsageError("range must be lo:hi:steps, got '" + text + "'");
        const double lo = parse_number(parts[0]), hi = parse_number(parts[1]);
        const double steps_raw = parse_number(parts[2]);
        if (!(steps_raw >= 1.0) || steps_raw != std::floor(steps_raw)) throw UsageError("range steps must be a positive integer");
        const auto steps = static_cast<std::size_t>(steps_raw);
        std::vector<double> grid;
        for (std::size_t k = 0; k <= steps; ++k)
            grid.push_back(k == steps ? hi : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(steps));
        return grid;
    }
    std::vector<double> values;
    for (const auto& part : split(text, ',')) values.push_back(parse_number(part));
    if (values.empty()) throw UsageError("empty list");
    return values;
}

struct Options {
    std::string family = "eps";
    double param = 0.0;
    double a = 0.0, b = 0.0;
    std::string energies;
    double mean_energy = 0.0;
    std::string model;
    double p = 0.0;
    std::uint64_t n = 100000;
    std::uint64_t seed = 42;
    std::string format = "csv";
    std::string out;
    double abs_tol = 0.0, rel_tol = 0.0;
    std::string eta;
    std::string occupations;
    std::string probs;

    CLI::App* app = nullptr;
    bool given(const std::string& name) const { return app->count(name) > 0; }
};

struct Energies {
    std::vector<double> values;
    std::optional<double> mean_energy;  // from a spectrum file
};

Energies load_energies(const Options& o) {
    if (o.energies.empty()) throw UsageError("--energies is required");
    if (o.energies.front() == '@') {
        const auto doc = json::parse(read_file(o.energies.substr(1)), nullptr, false);
        if (doc.is_discarded() || !doc.is_object() || !doc.contains("energies"))
            throw UsageError("spectrum file must be a JSON object with \"energies\"");
        Energies e;
        for (const auto& v : doc.at("energies")) e.values.push_back(v.get<double>());
        if (doc.contains("mean_energy")) e.mean_energy = doc.at("mean_energy").get<double>();
        return e;
    }
    return {parse_grid(o.energies), std::nullopt};
}

phistat_family load_family(const Options& o) {
    phistat_family f{};
    if (o.family == "eps") {
        f.kind = PHISTAT_FAMILY_EPSILON;
    } else if (o.family == "haldane") {
        f.kind = PHISTAT_FAMILY_HALDANE;
    } else if (o.family == "bgs") {
        f.kind = PHISTAT_FAMILY_BGS;
    } else {
        throw UsageError("--family must be eps, haldane or bgs");
    }
    if (f.kind != PHISTAT_FAMILY_BGS && !o.given("--param")) throw UsageError("--param is required for --family " + o.family);
    f.parameter = o.param;
    check(phistat_family_check(f), "--param");
    return f;
}

ConfigPtr load_config(const Options& o) {
    phistat_config* raw = nullptr;
    if (o.given("--abs-tol") || o.given("--rel-tol")) {
        phistat_config* defaults = nullptr;
        check(phistat_config_default(&defaults));
        ConfigPtr base(defaults);
        const double abs_tol = o.given("--abs-tol") ? o.abs_tol : 1e-10;
        const double rel_tol = o.given("--rel-tol") ? o.rel_tol : 1e-10;
        if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw UsageError("tolerance overrides must be positive");
        check(phistat_config_with_tolerances(base.get(), abs_tol, rel_tol, &raw), "tolerances");
    } else {
        check(phistat_config_default(&raw));
    }
    return ConfigPtr(raw);
}

// A table rendered as CSV (header + rows) or as a JSON array of row objects.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    std::string render(const std::string& format) const {
        std::string text;
        if (format == "csv") {
            for (std::size_t c = 0; c < columns.size(); ++c) text += (c ? "," : "") + columns[c];
            text += '\n';
            for (const auto& row : rows) {
                for (std::size_t c = 0; c < row.size(); ++c) text += (c ? "," : "") + format_number(row[c]);
                text += '\n';
            }
            return text;
        }
        json doc = json::array();
        for (const auto& row : rows) {
            json entry = json::object();
            for (std::size_t c = 0; c < columns.size(); ++c) entry[columns[c]] = row[c];
            doc.push_back(std::move(entry));
        }
        return doc.dump() + "\n";
    }
};

std::string csv_record(const std::vector<std::pair<std::string, std::string>>& fields) {
    std::string header, values;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        header += (i ? "," : "") + fields[i].first;
        values += (i ? "," : "") + fields[i].second;
    }
    return header + "\n" + values + "\n";
}

std::string cmd_occupation(const Options& o) {
    const auto family = load_family(o);
    const auto cfg = load_config(o);
    if (!o.given("--a") || !o.given("--b")) throw UsageError("--a and --b are required");
    Table table{{"E", "p"}, {}};
    for (double e : load_energies(o).values) {
        double w = 0.0;
        check(phistat_weight(family, o.a + o.b * e, cfg.get(), &w), "E=" + format_number(e));
        table.rows.push_back({e, w});
    }
    return table.render(o.format);
}

json solution_json(const phistat_solution* s) {
    char* raw = nullptr;
    check(phistat_solution_to_json(s, &raw));
    StringPtr text(raw);
    return json::parse(text.get());
}

std::vector<double> occupations(const phistat_solution* s) {
    std::vector<double> p(phistat_solution_size(s));
    check(phistat_solution_occupations(s, p.data(), p.size()));
    return p;
}

std::string cmd_maxent(const Options& o) {
    const auto family = load_family(o);
    const auto cfg = load_config(o);
    const auto energies = load_energies(o);
    double mean = 0.0;
    if (o.given("--mean-energy")) {
        mean = o.mean_energy;
    } else if (energies.mean_energy) {
        mean = *energies.mean_energy;
    } else {
        throw UsageError("--mean-energy is required unless the spectrum file provides it");
    }

    phistat_problem* raw_problem = nullptr;
    check(phistat_problem_create(energies.values.data(), energies.values.size(), mean, family, &raw_problem));
    ProblemPtr problem(raw_problem);

    phistat_solution* raw = nullptr;
    check(phistat_solve(problem.get(), PHISTAT_SOLVER_CLOSED_FORM, cfg.get(), &raw), "closed-form solver");
    SolutionPtr closed(raw);
    check(phistat_solve(problem.get(), PHISTAT_SOLVER_NUMERIC, cfg.get(), &raw), "numeric solver");
    SolutionPtr numeric(raw);

    const auto p_closed = occupations(closed.get());
    const auto p_numeric = occupations(numeric.get());
    double discrepancy = 0.0;
    for (std::size_t i = 0; i < p_closed.size(); ++i) discrepancy = std::max(discrepancy, std::abs(p_closed[i] - p_numeric[i]));

    phistat_maximum_report report{};
    const auto verdict = phistat_verify_maximum(closed.get(), problem.get(), o.seed, 100, &report);
    if (verdict != PHISTAT_OK && verdict != PHISTAT_VERIFICATION_FAILURE) check(verdict, "verification");
    const std::string failure = verdict == PHISTAT_OK ? "" : phistat_last_error();

    if (o.format == "csv") {
        Table table{{"E", "p", "p_numeric"}, {}};
        for (std::size_t i = 0; i < p_closed.size(); ++i) table.rows.push_back({energies.values[i], p_closed[i], p_numeric[i]});
        return table.render("csv");
    }
    json doc = solution_json(closed.get());
    doc["numeric"] = solution_json(numeric.get());
    doc["discrepancy"] = discrepancy;
    doc["verification"] = {{"passed", report.passed != 0},
                           {"stationarity_residual", report.stationarity_residual},
                           {"constraint_residual", report.constraint_residual},
                           {"hessian_negative", report.hessian_negative != 0},
                           {"directions_tested", report.directions_tested},
                           {"perturbation_violations", report.perturbation_violations},
                           {"smallest_drop", report.smallest_drop}};
    if (!failure.empty()) doc["verification"]["failure"] = failure;
    return doc.dump() + "\n";
}

std::string cmd_entropy(const Options& o) {
    const auto family = load_family(o);
    if (!o.probs.empty()) {
        const auto p = parse_grid(o.probs);
        double h = 0.0;
        std::vector<double> grad(p.size()), hess(p.size());
        check(phistat_entropy_value(family, p.data(), p.size(), &h), "entropy");
        check(phistat_entropy_gradient(family, p.data(), p.size(), grad.data()), "gradient");
        check(phistat_entropy_hessian(family, p.data(), p.size(), hess.data()), "hessian");
        if (o.format == "csv") return csv_record({{"entropy", format_number(h)}});
        return json{{"p", p}, {"entropy", h}, {"gradient", grad}, {"hessian", hess}}.dump() + "\n";
    }
    const auto grid = parse_grid(o.occupations.empty() ? "0.05:0.95:18" : o.occupations);
    Table table{{"p", "entropy", "gradient", "hessian"}, {}};
    for (double x : grid) {
        double h = 0.0, g = 0.0, k = 0.0;
        const std::string context = "p=" + format_number(x);
        check(phistat_entropy_value(family, &x, 1, &h), context);
        check(phistat_entropy_gradient(family, &x, 1, &g), context);
        check(phistat_entropy_hessian(family, &x, 1, &k), context);
        table.rows.push_back({x, h, g, k});
    }
    return table.render(o.format);
}

std::string cmd_wu(const Options& o) {
    if (!o.given("--param")) throw UsageError("--param (the exclusion parameter g) is required");
    const auto cfg = load_config(o);
    Table table{{"eta", "omega", "p"}, {}};
    for (double eta : parse_grid(o.eta.empty() ? "-5:5:40" : o.eta)) {
        double omega = 0.0, w = 0.0;
        const std::string context = "eta=" + format_number(eta);
        check(phistat_wu_omega(o.param, eta, cfg.get(), &omega), context);
        check(phistat_wu_weight(o.param, eta, cfg.get(), &w), context);
        table.rows.push_back({eta, omega, w});
    }
    return table.render(o.format);
}

std::string cmd_sample(const Options& o) {
    if (o.model.empty()) throw UsageError("--model is required");
    phistat_model_kind kind{};
    check(phistat_model_kind_from_name(o.model.c_str(), &kind), "--model");
    phistat_model* raw = nullptr;
    if (kind == PHISTAT_MODEL_CATEGORICAL) {
        if (o.probs.empty()) throw UsageError("--probs is required for the categorical model");
        const auto p = parse_grid(o.probs);
        const auto e = load_energies(o).values;
        if (p.size() != e.size()) throw UsageError("--probs and --energies differ in length");
        check(phistat_model_create_categorical(p.data(), e.data(), p.size(), &raw), "model");
    } else {
        if (!o.given("--p")) throw UsageError("--p is required");
        const bool curved = kind == PHISTAT_MODEL_CURVED_BERNOULLI || kind == PHISTAT_MODEL_CURVED_GEOMETRIC;
        if (curved && !o.given("--param")) throw UsageError("--param (eps) is required for curved models");
        check(phistat_model_create(kind, o.p, o.param, &raw), "model");
    }
    ModelPtr model(raw);
    if (o.n < 1) throw UsageError("--n must be at least 1");
    phistat_sample_stats s{};
    check(phistat_model_sample(model.get(), o.n, o.seed, &s), "sample");
    if (o.format == "csv")
        return csv_record({{"count", std::to_string(s.count)},
                           {"mean", format_number(s.mean)},
                           {"variance", format_number(s.variance)},
                           {"seed", std::to_string(s.seed)}});
    return json{{"count", s.count}, {"mean", s.mean}, {"variance", s.variance}, {"seed", s.seed}}.dump() + "\n";
}

std::string cmd_verify(const Options& o, bool& all_passed) {
    const auto cfg = load_config(o);
    char* raw = nullptr;
    int passed = 0;
    check(phistat_self_check(cfg.get(), o.seed, &raw, &passed), "self check");
    StringPtr text(raw);
    all_passed = passed != 0;
    if (o.format == "json") return std::string(text.get()) + "\n";
    const auto doc = json::parse(text.get());
    std::string lines;
    for (const auto& c : doc.at("checks")) {
        const std::string measured = c.at("measured").is_null() ? "inf" : format_number(c.at("measured").get<double>());
        lines += std::string(c.at("passed").get<bool>() ? "PASS" : "FAIL") + " " + c.at("name").get<std::string>() +
                 " measured=" + measured + " tolerance=" + format_number(c.at("tolerance").get<double>());
        if (c.contains("detail")) lines += " (" + c.at("detail").get<std::string>() + ")";
        lines += '\n';
    }
    return lines;
}

void emit(const Options& o, const std::string& text) {
    if (o.out.empty() || o.out == "-") {
        std::cout << text << std::flush;
        return;
    }
    std::ofstream file(o.out, std::ios::binary);
    if (!file) throw UsageError("cannot write " + o.out);
    file << text;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Generalized maximum-entropy occupations, entropies and checks"};
    app.require_subcommand(1, 1);
    Options o;
    o.app = &app;

    auto* occupation = app.add_subcommand("occupation", "Occupation weights over an energy grid");
    auto* maxent = app.add_subcommand("maxent", "Solve the constrained maximum-entropy problem");
    auto* entropy = app.add_subcommand("entropy", "Entropy, gradient and Hessian tables");
    auto* wu = app.add_subcommand("wu", "Solutions of the exclusion-statistics equation over an eta grid");
    auto* sample = app.add_subcommand("sample", "Monte-Carlo moments of an occupation model");
    auto* verify = app.add_subcommand("verify", "Run the built-in consistency battery");

    for (auto* sub : {occupation, maxent, entropy, wu, sample, verify}) {
        sub->add_option("--family", o.family, "eps, haldane or bgs")->check(CLI::IsMember({"eps", "haldane", "bgs"}));
        sub->add_option("--param", o.param, "eps in [-1, 1] or g in [0, 1]");
        sub->add_option("--a", o.a, "normalization multiplier");
        sub->add_option("--b", o.b, "energy multiplier");
        sub->add_option("--energies", o.energies, "x1,x2,..., lo:hi:steps or @spectrum.json");
        sub->add_option("--mean-energy", o.mean_energy, "mean-energy constraint");
        sub->add_option("--model", o.model, "categorical, bernoulli, geometric, curved-bernoulli, curved-geometric");
        sub->add_option("--p", o.p, "model parameter");
        sub->add_option("--n", o.n, "number of draws");
        sub->add_option("--seed", o.seed, "random seed");
        sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--out", o.out, "output path (default standard output)");
        sub->add_option("--abs-tol", o.abs_tol, "absolute integration tolerance");
        sub->add_option("--rel-tol", o.rel_tol, "relative integration tolerance");
        sub->add_option("--eta", o.eta, "eta grid for wu");
        sub->add_option("--occupations", o.occupations, "occupation grid for entropy");
        sub->add_option("--probs", o.probs, "probability vector");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }
    o.app = app.get_subcommands().front();

    try {
        bool passed = true;
        std::string text;
        if (*occupation) text = cmd_occupation(o);
        else if (*maxent) text = cmd_maxent(o);
        else if (*entropy) text = cmd_entropy(o);
        else if (*wu) text = cmd_wu(o);
        else if (*sample) text = cmd_sample(o);
        else text = cmd_verify(o, passed);
        emit(o, text);
        return passed ? 0 : 1;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const LibraryFailure& e) {
        std::cerr << (e.status == PHISTAT_INFEASIBLE_CONSTRAINT ? "infeasible constraint: " : "error: ") << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
