#pragma once

#include <algorithm>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kelvin/acceptance.hpp"
#include "kelvin/report_io.hpp"
#include "kelvin/verify.hpp"

namespace kelvin {

enum class Suite { pde2d, ie2d, pde3d, ie3d, identities, kelvin, inequalities, all };

struct RunConfig {
    Suite suite = Suite::identities;
    std::optional<double> p;
    std::optional<double> mu;
    std::optional<double> sigma;
    std::optional<std::vector<double>> center;
    double tol = 0.0;  // 0: per-suite defaults
    std::string output_path;
    enum class Format { json, csv } format = Format::json;
    int seed = 42;
};

struct CliError : std::runtime_error {
    explicit CliError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Flag parsing. Unknown flags, malformed numerics and a missing --suite are
/// rejected with the usage text attached to the error.
inline RunConfig parse_args(const std::vector<std::string>& args) {
    CLI::App app{"potential-theory verification suites for conformally invariant mixed-order systems"};
    app.set_help_flag();  // help handled by the binary, not the parser

    RunConfig out;
    std::string suite_str, format_str = "json", center_str;
    double p = 0, mu = 0, sigma = 0;
    auto* op = app.add_option("--p", p, "planar family exponent p > 0");
    auto* omu = app.add_option("--mu", mu, "bubble scale mu > 0");
    auto* osig = app.add_option("--sigma", sigma, "Hartree exponent sigma in (0,3)");
    app.add_option("--suite", suite_str,
                   "suite: pde2d|ie2d|pde3d|ie3d|identities|kelvin|inequalities|all")
        ->required();
    app.add_option("--center", center_str, "bubble center, comma-separated reals");
    app.add_option("--tol", out.tol, "quadrature relative tolerance override");
    app.add_option("--out", out.output_path, "output file path");
    app.add_option("--format", format_str, "output format: json|csv");
    app.add_option("--seed", out.seed, "seed for the property-test suites");

    std::vector<const char*> argv = {"kelvin-verify"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        throw CliError(std::string(e.what()) + "\n" + app.help());
    }

    if (suite_str == "pde2d") out.suite = Suite::pde2d;
    else if (suite_str == "ie2d") out.suite = Suite::ie2d;
    else if (suite_str == "pde3d") out.suite = Suite::pde3d;
    else if (suite_str == "ie3d") out.suite = Suite::ie3d;
    else if (suite_str == "identities") out.suite = Suite::identities;
    else if (suite_str == "kelvin") out.suite = Suite::kelvin;
    else if (suite_str == "inequalities") out.suite = Suite::inequalities;
    else if (suite_str == "all") out.suite = Suite::all;
    else throw CliError("unknown suite '" + suite_str + "'\n" + app.help());

    if (format_str == "json") out.format = RunConfig::Format::json;
    else if (format_str == "csv") out.format = RunConfig::Format::csv;
    else throw CliError("unknown format '" + format_str + "'\n" + app.help());

    if (op->count()) out.p = p;
    if (omu->count()) out.mu = mu;
    if (osig->count()) out.sigma = sigma;
    if (!center_str.empty()) {
        std::vector<double> coords;
        std::stringstream ss(center_str);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            try {
                std::size_t used = 0;
                coords.push_back(std::stod(tok, &used));
                if (used != tok.size()) throw std::invalid_argument(tok);
            } catch (const std::exception&) {
                throw CliError("malformed --center component '" + tok + "'\n" + app.help());
            }
        }
        if (coords.size() != 2 && coords.size() != 3)
            throw CliError("--center needs 2 or 3 comma-separated reals\n" + app.help());
        out.center = coords;
    }
    if (out.p && !(*out.p > 0.0)) throw CliError("--p must be positive\n" + app.help());
    if (out.mu && !(*out.mu > 0.0)) throw CliError("--mu must be positive\n" + app.help());
    if (out.sigma && !(*out.sigma > 0.0 && *out.sigma < 3.0))
        throw CliError("--sigma must lie in (0,3)\n" + app.help());
    return out;
}

namespace detail {

inline Point center2d(const RunConfig& rc) {
    if (rc.center && rc.center->size() == 2) return Point((*rc.center)[0], (*rc.center)[1]);
    return Point(0.0, 0.0);
}

inline Point center3d(const RunConfig& rc) {
    if (rc.center && rc.center->size() == 3)
        return Point((*rc.center)[0], (*rc.center)[1], (*rc.center)[2]);
    return Point(0.0, 0.0, 0.0);
}

template <class Fn>
void for_param_grid_2d(const RunConfig& rc, Fn&& fn) {
    const std::vector<double> ps = rc.p ? std::vector<double>{*rc.p} : std::vector<double>{1.0, 1.5, 3.0};
    const std::vector<double> mus =
        rc.mu ? std::vector<double>{*rc.mu} : std::vector<double>{0.5, 1.0, 2.0};
    for (double p : ps)
        for (double mu : mus) fn(Bubble2DParams(p, mu, center2d(rc)));
}

template <class Fn>
void for_param_grid_3d(const RunConfig& rc, Fn&& fn) {
    const std::vector<double> sigmas =
        rc.sigma ? std::vector<double>{*rc.sigma} : std::vector<double>{1.3, 2.0, 2.5};
    const std::vector<double> mus =
        rc.mu ? std::vector<double>{*rc.mu} : std::vector<double>{1.0, 2.0};
    for (double s : sigmas)
        for (double mu : mus) fn(Bubble3DParams::make(s, mu, center3d(rc)));
}

inline QuadratureConfig tuned(QuadratureConfig cfg, double tol) {
    if (tol > 0.0) cfg.rel_tol = tol;
    return cfg;
}

}  // namespace detail

/// Runs the requested suite over the flag-selected parameters (or the default
/// grids when no parameters were given) and returns one report per set.
inline std::vector<VerificationReport> run_suites(const RunConfig& rc) {
    std::vector<VerificationReport> reps;
    switch (rc.suite) {
        case Suite::pde2d:
            detail::for_param_grid_2d(rc, [&](const Bubble2DParams& b) {
                reps.push_back(verify_pde_2d(b, default_probes(2, b.center, b.mu),
                                             detail::tuned(suite_config(b.mu, 3e-5), rc.tol)));
            });
            break;
        case Suite::ie2d:
            detail::for_param_grid_2d(rc, [&](const Bubble2DParams& b) {
                reps.push_back(verify_ie_2d(b, ie_probes(2, b.center, b.mu),
                                            detail::tuned(suite_config(b.mu, 1e-6), rc.tol)));
            });
            break;
        case Suite::pde3d:
            detail::for_param_grid_3d(rc, [&](const Bubble3DParams& b) {
                reps.push_back(verify_pde_3d(b, default_probes(3, b.center, b.mu),
                                             detail::tuned(suite_config(b.mu, 1e-5), rc.tol)));
            });
            break;
        case Suite::ie3d:
            detail::for_param_grid_3d(rc, [&](const Bubble3DParams& b) {
                reps.push_back(verify_ie_3d(b, default_probes(3, b.center, b.mu),
                                            detail::tuned(suite_config(b.mu, 1e-5), rc.tol)));
            });
            break;
        case Suite::identities: {
            const auto b3 = Bubble3DParams::make(rc.sigma.value_or(2.0), rc.mu.value_or(1.0),
                                                 detail::center3d(rc));
            detail::for_param_grid_2d(rc, [&](const Bubble2DParams& b) {
                reps.push_back(
                    verify_identities(b, b3, detail::tuned(suite_config(b.mu, 1e-8), rc.tol)));
            });
            break;
        }
        case Suite::kelvin: {
            Bubble2DParams b2(rc.p.value_or(1.5), rc.mu.value_or(1.0), detail::center2d(rc));
            const auto b3 = Bubble3DParams::make(rc.sigma.value_or(2.0), rc.mu.value_or(1.0),
                                                 detail::center3d(rc));
            reps.push_back(verify_kelvin(b2, b3, detail::tuned(suite_config(1.0, 1e-7), rc.tol)));
            break;
        }
        case Suite::inequalities:
            reps.push_back(verify_inequalities(static_cast<unsigned>(rc.seed),
                                               detail::tuned(suite_config(1.0, 1e-7), rc.tol)));
            break;
        case Suite::all: {
            // criteria share some underlying suites; emit each report once
            std::vector<std::string> seen;
            for (auto& c : run_acceptance(static_cast<unsigned>(rc.seed)))
                for (auto& r : c.reports) {
                    const std::string key = r.suite_id + "|" + r.config_echo;
                    if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
                    seen.push_back(key);
                    reps.push_back(std::move(r));
                }
            break;
        }
    }
    return reps;
}

/// Serializes one report to the configured path/format; I/O failure throws.
inline void emit_report(const VerificationReport& rep, const RunConfig& rc) {
    const std::string text =
        rc.format == RunConfig::Format::json ? report_to_json(rep) : report_to_csv(rep);
    write_text_file(rc.output_path, text);
}

inline void emit_reports(const std::vector<VerificationReport>& reps, const RunConfig& rc) {
    const std::string text =
        rc.format == RunConfig::Format::json ? reports_to_json(reps) : reports_to_csv(reps);
    write_text_file(rc.output_path, text);
}

}  // namespace kelvin
