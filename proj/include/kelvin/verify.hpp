#pragma once

#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "kelvin/bubbles.hpp"
#include "kelvin/fractional_laplacian.hpp"
#include "kelvin/inequalities.hpp"
#include "kelvin/potentials.hpp"
#include "kelvin/quadrature.hpp"

namespace kelvin {

/// One probe-level comparison. rel_err floors the denominator at 1 so far
/// probes with tiny right sides are judged absolutely.
struct ResidualRecord {
    std::string equation_id;
    Point probe;
    double lhs = 0.0;
    double rhs = 0.0;
    double abs_err = 0.0;
    double rel_err = 0.0;
};

inline ResidualRecord make_record(std::string equation_id, const Point& probe, double lhs,
                                  double rhs) {
    ResidualRecord r;
    r.equation_id = std::move(equation_id);
    r.probe = probe;
    r.lhs = lhs;
    r.rhs = rhs;
    r.abs_err = std::abs(lhs - rhs);
    r.rel_err = r.abs_err / std::max(1.0, std::abs(rhs));
    return r;
}

/// Named integral comparison; judged by |computed - expected| <=
/// tolerance * max(1, |expected|), same floor convention as the records.
struct IntegralCheck {
    double computed = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;
};

struct VerificationReport {
    std::string suite_id;
    std::vector<ResidualRecord> records;
    std::vector<std::pair<std::string, IntegralCheck>> integrals;
    std::vector<std::pair<std::string, double>> equation_tolerances;
    std::vector<std::string> failures;  // propagated quadrature failures etc.
    bool passed = false;
    std::string config_echo;
};

inline double equation_tolerance(const VerificationReport& rep, const std::string& eq) {
    for (const auto& [id, tol] : rep.equation_tolerances)
        if (id == eq) return tol;
    return 0.0;
}

inline bool record_within_tolerance(const VerificationReport& rep, const ResidualRecord& r) {
    return r.rel_err <= equation_tolerance(rep, r.equation_id);
}

inline bool integral_within_tolerance(const IntegralCheck& c) {
    return std::abs(c.computed - c.expected) <= c.tolerance * std::max(1.0, std::abs(c.expected));
}

/// passed is a pure function of records, integrals and tolerances.
inline bool compute_passed(const VerificationReport& rep) {
    if (!rep.failures.empty()) return false;
    for (const auto& r : rep.records)
        if (!record_within_tolerance(rep, r)) return false;
    for (const auto& [name, c] : rep.integrals)
        if (!integral_within_tolerance(c)) return false;
    return true;
}

namespace detail {

inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string echo_config(const QuadratureConfig& cfg, const std::string& params) {
    std::ostringstream os;
    os << "rel_tol=" << fmt17(cfg.rel_tol) << ";abs_tol=" << fmt17(cfg.abs_tol)
       << ";truncation_radius=" << fmt17(cfg.truncation_radius) << ";pv_epsilons=";
    for (std::size_t i = 0; i < cfg.pv_epsilons.size(); ++i) {
        if (i) os << ",";
        os << fmt17(cfg.pv_epsilons[i]);
    }
    os << ";max_subdivisions=" << cfg.max_subdivisions << ";" << params;
    return os.str();
}

inline std::string echo_params(const Bubble2DParams& b) {
    std::ostringstream os;
    os << "p=" << fmt17(b.p) << ";mu=" << fmt17(b.mu) << ";center=" << fmt17(b.center[0]) << ","
       << fmt17(b.center[1]);
    return os.str();
}

inline std::string echo_params(const Bubble3DParams& b) {
    std::ostringstream os;
    os << "sigma=" << fmt17(b.sigma) << ";mu=" << fmt17(b.mu) << ";center=" << fmt17(b.center[0])
       << "," << fmt17(b.center[1]) << "," << fmt17(b.center[2]);
    return os.str();
}

inline std::vector<Point> probe_directions(int dim) {
    if (dim == 2) {
        const double s = 1.0 / std::sqrt(2.0);
        return {Point(1.0, 0.0), Point(0.0, -1.0), Point(s, s), Point(-0.894427190999916, 0.447213595499958)};
    }
    const double t = 1.0 / std::sqrt(3.0);
    return {Point(1.0, 0.0, 0.0), Point(0.0, 0.0, 1.0), Point(t, t, t),
            Point(-0.872871560943970, 0.436435780471985, -0.218217890235992)};
}

/// Fifty probes on three concentric circles/spheres inside B_lambda(x0),
/// clear of the lambda/100 ball around the center.
inline std::vector<Point> ms_probe_set(int dim, const Point& x0, double lambda) {
    std::vector<Point> out;
    int k = 0;
    for (double t : {0.25, 0.55, 0.85}) {
        const int count = out.size() < 34 ? 17 : 16;
        for (int j = 0; j < count && static_cast<int>(out.size()) < 50; ++j, ++k) {
            const double phi = 0.37 + 2.0 * M_PI * j / count;
            const Point w = dim == 2 ? sphere_direction_2d(phi)
                                     : sphere_direction_3d(std::cos(0.2 + 0.37 * k), phi);
            out.push_back(x0 + (t * lambda) * w);
        }
    }
    return out;
}

}  // namespace detail

/// Default probe set: the center, radii {0.5, 1, 3}/mu in four directions,
/// plus two far probes at 10/mu — peak, shoulder and tail of the bubbles.
inline std::vector<Point> default_probes(int dim, const Point& center, double mu) {
    std::vector<Point> out = {center};
    for (double r : {0.5, 1.0, 3.0})
        for (const auto& d : detail::probe_directions(dim)) out.push_back(center + (r / mu) * d);
    if (dim == 2) {
        out.push_back(center + (10.0 / mu) * Point(1.0, 0.0));
        out.push_back(center + (10.0 / mu) * Point(-0.6, -0.8));
    } else {
        out.push_back(center + (10.0 / mu) * Point(1.0, 0.0, 0.0));
        out.push_back(center + (10.0 / mu) * Point(-0.6, -0.8, 0.0));
    }
    return out;
}

/// Ten probes for the IE round trips: center plus three radii in three directions.
inline std::vector<Point> ie_probes(int dim, const Point& center, double mu) {
    std::vector<Point> out = {center};
    auto dirs = detail::probe_directions(dim);
    dirs.pop_back();
    for (double r : {0.5, 1.0, 3.0})
        for (const auto& d : dirs) out.push_back(center + (r / mu) * d);
    return out;
}

/// Finite-difference step used by the residual suites: the library default
/// scaled down by the feature size when the bubble is narrower than unit.
inline double suite_fd_step(const ScalarField& f, const Point& x) {
    return laplacian_fd_default_step(f, x) * std::min(1.0, f.feature_scale());
}

/// Suite quadrature defaults: the pv exclusion radii (also the extension
/// y-schedule) scale with the bubble feature size 1/mu.
inline QuadratureConfig suite_config(double mu, double rel_tol) {
    QuadratureConfig cfg;
    cfg.rel_tol = rel_tol;
    cfg.abs_tol = 1e-10;
    cfg.pv_epsilons = {0.08 / mu, 0.04 / mu, 0.02 / mu};
    cfg.max_subdivisions = 6000;
    return cfg;
}

/// Residuals of the planar system: (-Delta)^{1/2} u = e^{p v} via the PV
/// operator and -Delta v = u^4 via fourth-order finite differences.
inline VerificationReport verify_pde_2d(const Bubble2DParams& b, const std::vector<Point>& probes,
                                        const QuadratureConfig& cfg) {
    VerificationReport rep;
    rep.suite_id = "pde2d";
    rep.equation_tolerances = {{"half_laplacian_u_vs_exp_pv", 1e-3}, {"neg_laplacian_v_vs_u4", 1e-6}};
    rep.config_echo = detail::echo_config(cfg, detail::echo_params(b));

    const FracLapConvention conv = make_convention(2, 1.0, cfg, /*calibrate=*/false);
    ScalarField u = bubble2d_u_field(b);
    ScalarField v = bubble2d_v_field(b);
    for (const auto& x : probes) {
        try {
            auto r = fraclap_pv_result(u, x, conv, cfg);
            if (!r.quad.converged) throw std::runtime_error(r.quad.message);
            const double rhs = bubble2d_epv_field(b)(x);
            rep.records.push_back(make_record("half_laplacian_u_vs_exp_pv", x, r.value, rhs));
        } catch (const std::exception& e) {
            rep.failures.push_back("half_laplacian_u_vs_exp_pv @" + detail::fmt17(x[0]) + "," + detail::fmt17(x[1]) + ": " + std::string(e.what()));
        }
        try {
            const double lhs = laplacian_fd(v, x, suite_fd_step(v, x));
            const double uu = bubble2d_eval(b, x).first;
            rep.records.push_back(make_record("neg_laplacian_v_vs_u4", x, lhs, std::pow(uu, 4.0)));
        } catch (const std::exception& e) {
            rep.failures.push_back("neg_laplacian_v_vs_u4 @" + detail::fmt17(x[0]) + "," + detail::fmt17(x[1]) + ": " + std::string(e.what()));
        }
    }
    rep.passed = compute_passed(rep);
    return rep;
}

/// Round trips of the planar IE system: riesz2d(e^{pv}) vs u and
/// logpot2d(u^4) + gamma vs v, with gamma = v(0).
inline VerificationReport verify_ie_2d(const Bubble2DParams& b, const std::vector<Point>& probes,
                                       const QuadratureConfig& cfg) {
    VerificationReport rep;
    rep.suite_id = "ie2d";
    rep.equation_tolerances = {{"riesz2d_exp_pv_vs_u", 1e-4}, {"logpot2d_u4_plus_gamma_vs_v", 1e-4}};
    rep.config_echo = detail::echo_config(cfg, detail::echo_params(b));

    ScalarField epv = bubble2d_epv_field(b);
    ScalarField u4 = bubble2d_u4_field(b);
    const double gamma = bubble2d_invariants(b).gamma_const;
    for (const auto& x : probes) {
        try {
            auto q = riesz2d(epv, x, cfg);
            if (!q.converged) throw std::runtime_error(q.message);
            rep.records.push_back(
                make_record("riesz2d_exp_pv_vs_u", x, q.value, bubble2d_eval(b, x).first));
        } catch (const std::exception& e) {
            rep.failures.push_back("riesz2d_exp_pv_vs_u @" + detail::fmt17(x[0]) + "," + detail::fmt17(x[1]) + ": " + std::string(e.what()));
        }
        try {
            auto q = logpot2d(u4, x, cfg);
            if (!q.converged) throw std::runtime_error(q.message);
            rep.records.push_back(make_record("logpot2d_u4_plus_gamma_vs_v", x, q.value + gamma,
                                              bubble2d_eval(b, x).second));
        } catch (const std::exception& e) {
            rep.failures.push_back("logpot2d_u4_plus_gamma_vs_v @" + detail::fmt17(x[0]) + "," + detail::fmt17(x[1]) + ": " + std::string(e.what()));
        }
    }
    rep.passed = compute_passed(rep);
    return rep;
}

/// Residuals of the 3D system: (-Delta)^{1/2} u = P v^{4-sigma} with the
/// Hartree potential in closed form and by quadrature, the closed-vs-quad
/// cross check, and -Delta v = u^{5/2}.
inline VerificationReport verify_pde_3d(const Bubble3DParams& b, const std::vector<Point>& probes,
                                        const QuadratureConfig& cfg) {
    VerificationReport rep;
    rep.suite_id = "pde3d";
    rep.equation_tolerances = {{"half_laplacian_u_vs_hartree_closed", 1e-3},
                               {"half_laplacian_u_vs_hartree_quad", 1e-3},
                               {"hartree_closed_vs_quad", 1e-4},
                               {"neg_laplacian_v_vs_u52", 1e-3}};
    rep.config_echo = detail::echo_config(cfg, detail::echo_params(b));

    const FracLapConvention conv = make_convention(3, 1.0, cfg, /*calibrate=*/false);
    ScalarField u = bubble3d_u_field(b);
    ScalarField v = bubble3d_v_field(b);
    ScalarField P = bubble3d_hartree_field(b);
    QuadratureConfig hcfg = cfg;
    hcfg.rel_tol = std::min(cfg.rel_tol, 1e-6);
    for (const auto& x : probes) {
        double lhs1 = 0.0;
        bool have_lhs1 = false;
        try {
            auto r = fraclap_pv_result(u, x, conv, cfg);
            if (!r.quad.converged) throw std::runtime_error(r.quad.message);
            lhs1 = r.value;
            have_lhs1 = true;
            const double vv = bubble3d_eval(b, x).second;
            rep.records.push_back(make_record("half_laplacian_u_vs_hartree_closed", x, lhs1,
                                              P(x) * std::pow(vv, 4.0 - b.sigma)));
        } catch (const std::exception& e) {
            rep.failures.push_back("half_laplacian_u_vs_hartree_closed @" + detail::fmt17(x[0]) + "," + detail::fmt17(x[1]) + ": " + std::string(e.what()));
        }
        try {
            auto qP = hartree(v, b.sigma, x, hcfg);
            if (!qP.converged) throw std::runtime_error(qP.message);
            rep.records.push_back(make_record("hartree_closed_vs_quad", x, qP.value, P(x)));
            if (have_lhs1) {
                const double vv = bubble3d_eval(b, x).second;
                rep.records.push_back(make_record("half_laplacian_u_vs_hartree_quad", x, lhs1,
                                                  qP.value * std::pow(vv, 4.0 - b.sigma)));
            }
        } catch (const std::exception& e) {
            rep.failures.push_back("hartree_closed_vs_quad @" + detail::fmt17(x[0]) + "," + detail::fmt17(x[1]) + ": " + std::string(e.what()));
        }
        try {
            const double lhs = laplacian_fd(v, x, suite_fd_step(v, x));
            const double uu = bubble3d_eval(b, x).first;
            rep.records.push_back(make_record("neg_laplacian_v_vs_u52", x, lhs, std::pow(uu, 2.5)));
        } catch (const std::exception& e) {
            rep.failures.push_back("neg_laplacian_v_vs_u52 @" + detail::fmt17(x[0]) + "," + detail::fmt17(x[1]) + ": " + std::string(e.what()));
        }
    }
    rep.passed = compute_passed(rep);
    return rep;
}

/// Round trips of the 3D IE system: riesz3d_inv_halflap(P v^{4-sigma}) vs u
/// and newton3d(u^{5/2}) vs v. The source uses the closed-form Hartree
/// potential (its own quadrature cross-check lives in the pde3d suite).
inline VerificationReport verify_ie_3d(const Bubble3DParams& b, const std::vector<Point>& probes,
                                       const QuadratureConfig& cfg) {
    VerificationReport rep;
    rep.suite_id = "ie3d";
    rep.equation_tolerances = {{"riesz3d_source_vs_u", 1e-3}, {"newton3d_u52_vs_v", 1e-3}};
    rep.config_echo = detail::echo_config(cfg, detail::echo_params(b));

    ScalarField src = bubble3d_source_field(b);
    ScalarField u52 = bubble3d_u52_field(b);
    for (const auto& x : probes) {
        try {
            auto q = riesz3d_inv_halflap(src, x, cfg);
            if (!q.converged) throw std::runtime_error(q.message);
            rep.records.push_back(
                make_record("riesz3d_source_vs_u", x, q.value, bubble3d_eval(b, x).first));
        } catch (const std::exception& e) {
            rep.failures.push_back("riesz3d_source_vs_u @" + detail::fmt17(x[0]) + "," + detail::fmt17(x[1]) + ": " + std::string(e.what()));
        }
        try {
            auto q = newton3d(u52, x, cfg);
            if (!q.converged) throw std::runtime_error(q.message);
            rep.records.push_back(
                make_record("newton3d_u52_vs_v", x, q.value, bubble3d_eval(b, x).second));
        } catch (const std::exception& e) {
            rep.failures.push_back("newton3d_u52_vs_v @" + detail::fmt17(x[0]) + "," + detail::fmt17(x[1]) + ": " + std::string(e.what()));
        }
    }
    rep.passed = compute_passed(rep);
    return rep;
}

/// Quadrature vs closed form for the planar integral identities, the I(gamma)
/// formula, and the algebraic identities tying the 3D constants together.
inline VerificationReport verify_identities(const Bubble2DParams& b2, const Bubble3DParams& b3,
                                            const QuadratureConfig& cfg) {
    VerificationReport rep;
    rep.suite_id = "identities";
    rep.config_echo =
        detail::echo_config(cfg, detail::echo_params(b2) + ";" + detail::echo_params(b3));
    const auto inv = bubble2d_invariants(b2);

    QuadratureConfig tight = cfg;
    tight.rel_tol = std::min(cfg.rel_tol, 1e-8);
    auto add_integral = [&rep](const std::string& name, double computed, double expected,
                               double tol) {
        rep.integrals.push_back({name, IntegralCheck{computed, expected, tol}});
    };

    add_integral("int_u4", integrate_space(bubble2d_u4_field(b2), tight).value, inv.total_u4, 1e-6);
    add_integral("int_exp_pv", integrate_space(bubble2d_epv_field(b2), tight).value, inv.total_epv,
                 1e-6);
    add_integral("int_exp_4pv3", integrate_space(bubble2d_e4pv3_field(b2), tight).value,
                 inv.total_e4pv3, 1e-6);

    add_integral("I_1_closed_form", riesz_identity_I(3, 1.0), M_PI * M_PI, 1e-12);
    QuadratureConfig icfg = cfg;
    icfg.rel_tol = std::min(cfg.rel_tol, 1e-6);
    for (double gamma : {0.5, 1.0, 1.25})
        for (double xr : {0.0, 1.0, 2.0}) {
            const Point x(xr, 0.0, 0.0);
            const double lhs = riesz_identity_I_quadrature(3, gamma, x, icfg).value;
            const double rhs = riesz_identity_I(3, gamma) * std::pow(1.0 + x.norm2(), -gamma);
            std::ostringstream name;
            name << "I_gamma_quad_g" << gamma << "_x" << xr;
            add_integral(name.str(), lhs, rhs, 1e-4);
        }

    for (double sigma : {0.5, 1.0, 2.0, 2.5}) {
        const auto bb = Bubble3DParams::make(sigma, b3.mu, b3.center);
        std::ostringstream n1, n2;
        n1 << "constants_C52_vs_3Cprime_sigma" << sigma;
        n2 << "constants_2C_vs_ICprime_sigma" << sigma;
        add_integral(n1.str(), std::pow(bb.C, 2.5), 3.0 * bb.Cprime, 1e-12);
        add_integral(n2.str(), 2.0 * bb.C,
                     riesz_identity_I(3, 0.5 * sigma) * std::pow(bb.Cprime, 10.0 - 2.0 * sigma),
                     1e-12);
    }

    rep.passed = compute_passed(rep);
    return rep;
}

/// Kelvin-transform and moving-spheres checks (inversion involution, the
/// critical scale against its algebraic value, vanishing difference fields at
/// the critical scale, the sign flip across it) plus the far-field fits of
/// the planar family.
inline VerificationReport verify_kelvin(const Bubble2DParams& b2, const Bubble3DParams& b3,
                                        const QuadratureConfig& cfg) {
    VerificationReport rep;
    rep.suite_id = "kelvin";
    rep.config_echo =
        detail::echo_config(cfg, detail::echo_params(b2) + ";" + detail::echo_params(b3));
    auto add = [&rep](const std::string& name, double computed, double expected, double tol) {
        rep.integrals.push_back({name, IntegralCheck{computed, expected, tol}});
    };

    // involution of the point inversion and of the field transform
    {
        double worst_pt = 0.0, worst_field = 0.0;
        const KelvinSpec spec(Point(0.25, -0.4), 1.3, 1.0);
        ScalarField u = bubble2d_u_field(b2);
        for (int k = 0; k < 24; ++k) {
            const double phi = 0.13 + k * 0.26, r = 0.1 + 0.35 * (k % 7);
            const Point x = spec.center + r * sphere_direction_2d(phi);
            worst_pt = std::max(worst_pt, distance(kelvin_point(kelvin_point(x, spec), spec), x));
            ScalarField uk(
                2, [&u, &spec](const Point& y) { return kelvin_field(u, spec, y); },
                u.decay());
            const double twice = kelvin_field(uk, spec, x);
            worst_field =
                std::max(worst_field, std::abs(twice - u(x)) / std::max(1.0, std::abs(u(x))));
        }
        add("kelvin_point_involution", worst_pt, 0.0, 1e-12);
        add("kelvin_field_involution", worst_field, 0.0, 1e-12);
    }

    // critical scale and difference fields, 2D and 3D, offsets d in {0, 1, 2}
    for (double d : {0.0, 1.0, 2.0}) {
        {
            const Point x0 = b2.center + d * Point(1.0, 0.0);
            const double alg = critical_scale_algebraic(b2, x0);
            const double num = critical_scale(b2, x0, 1e-8);
            std::ostringstream n1;
            n1 << "critical_scale_2d_d" << d;
            add(n1.str(), num, alg, 1e-6);

            double worst_u = 0.0, worst_v = 0.0;
            const KelvinSpec spec(x0, alg, 1.0);
            for (const auto& x : detail::ms_probe_set(2, x0, alg)) {
                auto [wu, wv] = msdiff(b2, spec, x);
                worst_u = std::max(worst_u, std::abs(wu));
                worst_v = std::max(worst_v, std::abs(wv));
            }
            std::ostringstream n2, n3;
            n2 << "msdiff_wu_at_critical_2d_d" << d;
            n3 << "msdiff_wv_at_critical_2d_d" << d;
            add(n2.str(), worst_u, 0.0, 1e-8);
            add(n3.str(), worst_v, 0.0, 1e-8);
        }
        {
            const Point x0 = b3.center + d * Point(1.0, 0.0, 0.0);
            const double alg = critical_scale_algebraic(b3, x0);
            const double num = critical_scale(b3, x0, 1e-8);
            std::ostringstream n1;
            n1 << "critical_scale_3d_d" << d;
            add(n1.str(), num, alg, 1e-6);

            double worst_u = 0.0, worst_v = 0.0;
            const KelvinSpec spec(x0, alg, 2.0);
            for (const auto& x : detail::ms_probe_set(3, x0, alg)) {
                auto [wu, wv] = msdiff(b3, spec, x);
                worst_u = std::max(worst_u, std::abs(wu));
                worst_v = std::max(worst_v, std::abs(wv));
            }
            std::ostringstream n2, n3;
            n2 << "msdiff_wu_at_critical_3d_d" << d;
            n3 << "msdiff_wv_at_critical_3d_d" << d;
            add(n2.str(), worst_u, 0.0, 1e-8);
            add(n3.str(), worst_v, 0.0, 1e-8);
        }
    }

    // uniform interior sign of w_u away from the critical scale, with a flip
    {
        const Point x0 = b2.center + Point(1.0, 0.0);
        const double lc = critical_scale_algebraic(b2, x0);
        for (double factor : {0.5, 0.9, 1.1, 2.0}) {
            const double lambda = factor * lc;
            const KelvinSpec spec(x0, lambda, 1.0);
            int pos = 0, neg = 0;
            for (const auto& x : detail::ms_probe_set(2, x0, lambda)) {
                const double wu = msdiff(b2, spec, x).first;
                (wu > 0 ? pos : neg) += 1;
            }
            std::ostringstream nm;
            nm << "msdiff_sign_uniform_2d_lambda" << factor;
            // expected sign: positive below the critical scale, negative above
            const double expected = factor < 1.0 ? 1.0 : -1.0;
            const double got = pos == 50 ? 1.0 : (neg == 50 ? -1.0 : 0.0);
            add(nm.str(), got, expected, 0.0);
        }
    }
    {
        const Point x0 = b3.center + Point(1.0, 0.0, 0.0);
        const double lc = critical_scale_algebraic(b3, x0);
        for (double factor : {0.5, 0.9, 1.1, 2.0}) {
            const double lambda = factor * lc;
            const KelvinSpec spec(x0, lambda, 2.0);
            int pos = 0, neg = 0;
            for (const auto& x : detail::ms_probe_set(3, x0, lambda)) {
                const double wu = msdiff(b3, spec, x).first;
                (wu > 0 ? pos : neg) += 1;
            }
            std::ostringstream nm;
            nm << "msdiff_sign_uniform_3d_lambda" << factor;
            const double expected = factor < 1.0 ? 1.0 : -1.0;
            const double got = pos == 50 ? 1.0 : (neg == 50 ? -1.0 : 0.0);
            add(nm.str(), got, expected, 0.0);
        }
    }

    // far-field fits of the planar family
    {
        const auto inv = bubble2d_invariants(b2);
        auto [alpha_hat, beta_hat] = asymptotics_fit(b2, {100.0, 1000.0, 10000.0});
        add("asymptotics_alpha_hat", alpha_hat, inv.alpha, 0.02);
        add("asymptotics_beta_hat", beta_hat, inv.beta, 0.01);
    }

    rep.passed = compute_passed(rep);
    return rep;
}

/// Seeded random checks of the exp^L + L ln L inequality, the Orlicz pairing
/// contract on random radial plateau pairs, the HLS scale invariance, and the
/// Green's function battery (C_0 from its defining integral, symmetry,
/// positivity, exterior zero, scaling).
inline VerificationReport verify_inequalities(unsigned seed, const QuadratureConfig& cfg) {
    VerificationReport rep;
    rep.suite_id = "inequalities";
    rep.config_echo = detail::echo_config(cfg, "seed=" + std::to_string(seed));
    auto add = [&rep](const std::string& name, double computed, double expected, double tol) {
        rep.integrals.push_back({name, IntegralCheck{computed, expected, tol}});
    };

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u50(0.0, 50.0);
    double min_gap = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 100000; ++i) {
        const double g = explogl_gap(u50(rng), u50(rng));
        min_gap = std::min(min_gap, g);
    }
    add("explogl_min_gap_1e5", std::min(min_gap, 0.0), 0.0, 1e-12);

    std::uniform_real_distribution<double> uh(0.0, 2.5);
    std::uniform_real_distribution<double> ur(0.2, 1.0);
    double min_slack = std::numeric_limits<double>::infinity();
    bool orlicz_ok = true;
    QuadratureConfig ocfg = cfg;
    ocfg.rel_tol = 1e-8;
    for (int i = 0; i < 100; ++i) {
        const double r1 = ur(rng), h1 = uh(rng), h1b = uh(rng);
        const double r2 = ur(rng), h2 = uh(rng), h2b = uh(rng);
        auto plateau = [](double rin, double hin, double hout) {
            return [rin, hin, hout](double r) { return r < rin ? hin : hout; };
        };
        ScalarField f = make_radial_field(2, plateau(r1, h1, h1b), Point(0.0, 0.0),
                                          DecayHint(0.0, std::max(h1, h1b), 1.0));
        ScalarField g = make_radial_field(2, plateau(r2, h2, h2b), Point(0.0, 0.0),
                                          DecayHint(0.0, std::max(h2, h2b), 1.0));
        auto res = orlicz_pair(f, g, 1.5, ocfg);
        orlicz_ok = orlicz_ok && res.converged;
        min_slack = std::min(min_slack, res.slack);
    }
    add("orlicz_min_slack_100", std::min(min_slack, 0.0), 0.0, orlicz_ok ? 1e-9 : 0.0);

    {
        ScalarField g = gaussian_field(2, Point::zero(2), 1.0);
        ScalarField g2(
            2, [g](const Point& x) { return 2.0 * g(x); },
            DecayHint(g.decay().exponent, 2.0 * g.decay().coefficient, g.decay().valid_radius));
        g2.set_center_hint(Point::zero(2), true);
        QuadratureConfig hcfg = cfg;
        hcfg.rel_tol = 1e-5;
        const double r1 = hls_ratio(g, 2, 1.0, 1.2, 3.0, hcfg).value;
        const double r2 = hls_ratio(g2, 2, 1.0, 1.2, 3.0, hcfg).value;
        add("hls_scale_invariance", std::abs(r1 - r2) / r1, 0.0, 1e-10);
        add("hls_gaussian_ratio_positive", r1 > 0.0 ? 1.0 : 0.0, 1.0, 0.0);
    }

    {
        QuadratureConfig gcfg = cfg;
        gcfg.rel_tol = 1e-10;
        gcfg.abs_tol = 1e-13;
        add("green_c0_defining_integral", green_c0_from_integral(gcfg).value,
            1.0 / (2.0 * M_PI * M_PI), 1e-8);

        GreenBallParams gb(1.0);
        std::uniform_real_distribution<double> uc(-0.99, 0.99);
        double worst_sym = 0.0, min_val = std::numeric_limits<double>::infinity();
        double worst_scale = 0.0;
        bool exterior_zero = true;
        GreenBallParams gb3(3.0);
        for (int i = 0; i < 1000; ++i) {
            Point x(uc(rng) * 0.7, uc(rng) * 0.7);
            Point y(uc(rng) * 0.7, uc(rng) * 0.7);
            if (distance(x, y) < 1e-6) continue;
            const double gxy = green_half_ball(gb, x, y);
            const double gyx = green_half_ball(gb, y, x);
            worst_sym = std::max(worst_sym, std::abs(gxy - gyx) / std::max(1.0, std::abs(gxy)));
            min_val = std::min(min_val, gxy);
            const double g3 = green_half_ball(gb3, 3.0 * x, 3.0 * y);
            worst_scale = std::max(worst_scale, std::abs(g3 - gxy / 3.0) / std::max(1e-30, gxy / 3.0));
            exterior_zero = exterior_zero &&
                            green_half_ball(gb, Point(1.01, 0.0), y) == 0.0 &&
                            green_half_ball(gb, x, Point(0.0, -1.2)) == 0.0;
        }
        add("green_symmetry_1e3", worst_sym, 0.0, 1e-13);
        add("green_min_interior_value", min_val > 0.0 ? 1.0 : 0.0, 1.0, 0.0);
        add("green_scaling_law", worst_scale, 0.0, 1e-10);
        add("green_exterior_zero", exterior_zero ? 1.0 : 0.0, 1.0, 0.0);
    }

    rep.passed = compute_passed(rep);
    return rep;
}

}  // namespace kelvin
