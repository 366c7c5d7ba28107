#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "kelvin/field.hpp"
#include "kelvin/geometry.hpp"
#include "kelvin/quadrature.hpp"

namespace kelvin {

/// norm_const * int g(y) / |x-y|^power dy over R^n. The workhorse behind the
/// Riesz, Newtonian and Hartree convolutions: the kernel singularity at y = x
/// becomes the main polar center, g's own singular points are extracted with
/// bumps, and the tail hint is the kernel-weighted lift of g's hint.
inline QuadResult riesz_potential(const ScalarField& g, const Point& x, double power,
                                  double norm_const, const QuadratureConfig& cfg) {
    if (x.dim() != g.dim()) throw std::invalid_argument("riesz_potential: dimension mismatch");
    const int n = g.dim();
    if (!(power < n))
        throw std::invalid_argument("riesz_potential: kernel power must be < dimension");
    const DecayHint& dg = g.decay();
    if (cfg.truncation_radius == 0.0 && !(dg.exponent + power > n))
        throw std::invalid_argument("riesz_potential: non-integrable tail per decay hint");

    std::vector<Point> sing = {x};
    for (const auto& s : g.singularities())
        if (distance(s, x) > 1e-14) sing.push_back(s);

    DecayHint hint(dg.exponent + power,
                   std::abs(norm_const) * dg.coefficient * std::pow(2.0, power),
                   std::max({2.0 * x.norm(), dg.valid_radius, 1.0}));
    ScalarField meta(
        n, [](const Point&) { return 0.0; }, hint, std::move(sing));
    meta.set_feature_scale(g.feature_scale());
    auto h = [&g, power, norm_const](const Point& y, double r) {
        return norm_const * g(y) / std::pow(r, power);
    };

    std::optional<Point> axis;
    if (g.radial() && g.center_hint() && distance(*g.center_hint(), x) > 1e-14) {
        const Point d = *g.center_hint() - x;
        axis = (1.0 / d.norm()) * d;
    }

    // When the kernel point sits far outside the field's feature region,
    // integrating about the kernel point makes the field a sharp angular spot;
    // flip to shells about the field center and bump-extract the kernel
    // singularity instead.
    const bool far_kernel =
        g.center_hint() && distance(*g.center_hint(), x) > 6.0 * g.feature_scale();
    if (far_kernel) {
        const Point field_center = *g.center_hint();
        meta.set_center_hint(field_center, false);
        return integrate_space_impl(meta, cfg, h, &x, &field_center, axis ? &*axis : nullptr);
    }
    if (g.center_hint()) meta.set_center_hint(*g.center_hint(), g.radial());
    return integrate_space_impl(meta, cfg, h, &x, nullptr, axis ? &*axis : nullptr);
}

/// (1/2pi) int g(y)/|x-y| dy on R^2 — the inverse half-Laplacian.
inline QuadResult riesz2d(const ScalarField& g, const Point& x, const QuadratureConfig& cfg) {
    if (g.dim() != 2) throw std::invalid_argument("riesz2d: field must live on R^2");
    return riesz_potential(g, x, 1.0, 1.0 / (2.0 * M_PI), cfg);
}

/// (1/4pi) int g(y)/|x-y| dy on R^3 — the Newtonian potential.
inline QuadResult newton3d(const ScalarField& g, const Point& x, const QuadratureConfig& cfg) {
    if (g.dim() != 3) throw std::invalid_argument("newton3d: field must live on R^3");
    return riesz_potential(g, x, 1.0, 1.0 / (4.0 * M_PI), cfg);
}

/// (1/2pi^2) int g(y)/|x-y|^2 dy on R^3 — the inverse half-Laplacian.
inline QuadResult riesz3d_inv_halflap(const ScalarField& g, const Point& x,
                                      const QuadratureConfig& cfg) {
    if (g.dim() != 3) throw std::invalid_argument("riesz3d_inv_halflap: field must live on R^3");
    return riesz_potential(g, x, 2.0, 1.0 / (2.0 * M_PI * M_PI), cfg);
}

/// zeta(x) = (1/2pi) int ln(|y|/|x-y|) g(y) dy on R^2. The additive constant
/// of the representation formula is the caller's business. zeta(0) = 0 is a
/// kernel identity and is returned exactly. The lone kernel grows too slowly
/// to split at infinity: the tail uses |ln(|x-y|/|y|)| <= 2|x|/|y| for
/// |y| >= 2|x|, which needs g's decay exponent > 1.
inline QuadResult logpot2d(const ScalarField& g, const Point& x, const QuadratureConfig& cfg) {
    if (g.dim() != 2) throw std::invalid_argument("logpot2d: field must live on R^2");
    if (x.dim() != 2) throw std::invalid_argument("logpot2d: point must live on R^2");
    if (x.norm() == 0.0) return QuadResult{};

    const DecayHint& dg = g.decay();
    if (cfg.truncation_radius == 0.0 && !(dg.exponent > 1.0))
        throw std::invalid_argument("logpot2d: decay exponent must exceed 1");

    std::vector<Point> sing = {x};
    if (x.norm() > 1e-14) sing.push_back(Point(0.0, 0.0));
    for (const auto& s : g.singularities())
        if (distance(s, x) > 1e-14 && s.norm() > 1e-14) sing.push_back(s);

    DecayHint hint(dg.exponent + 1.0, 2.0 * x.norm() * dg.coefficient / (2.0 * M_PI),
                   std::max({2.0 * x.norm(), dg.valid_radius, 1.0}));
    ScalarField meta(
        2, [](const Point&) { return 0.0; }, hint, std::move(sing));
    if (g.center_hint()) meta.set_center_hint(*g.center_hint(), false);
    meta.set_feature_scale(g.feature_scale());

    // reflection symmetry about the line through x, the origin and the field
    // center, when they are colinear (integrate_space_impl re-checks)
    std::optional<Point> axis;
    if (g.radial() && g.center_hint()) {
        const Point base = distance(*g.center_hint(), x) > 1e-14 ? *g.center_hint() - x
                                                                 : Point(0.0, 0.0) - x;
        if (base.norm() > 1e-14) axis = (1.0 / base.norm()) * base;
    }

    // ln(|y|/|x-y|) with |x-y| = r, the exact distance from the polar center x
    return integrate_space_impl(
        meta, cfg,
        [&g](const Point& y, double r) { return std::log(y.norm() / r) * g(y) / (2.0 * M_PI); },
        &x, nullptr, axis ? &*axis : nullptr);
}

/// Hartree potential P(y) = int v^{6-sigma}(z)/|y-z|^sigma dz on R^3.
inline QuadResult hartree(const ScalarField& v, double sigma, const Point& y,
                          const QuadratureConfig& cfg) {
    if (v.dim() != 3) throw std::invalid_argument("hartree: field must live on R^3");
    if (!(sigma > 0.0 && sigma < 3.0)) throw std::invalid_argument("hartree: sigma must lie in (0,3)");
    return riesz_potential(field_power(v, 6.0 - sigma), y, sigma, 1.0, cfg);
}

/// I(gamma) = pi^{n/2} Gamma((n-2 gamma)/2) / Gamma(n-gamma), the closed form
/// of int |x-y|^{-2 gamma} (1+|y|^2)^{gamma-n} dy = I(gamma) (1+|x|^2)^{-gamma}.
inline double riesz_identity_I(int n, double gamma) {
    if (n < 1) throw std::invalid_argument("riesz_identity_I: n must be >= 1");
    if (!(gamma > 0.0 && gamma < 0.5 * n))
        throw std::invalid_argument("riesz_identity_I: gamma must lie in (0, n/2)");
    return std::pow(M_PI, 0.5 * n) * std::tgamma(0.5 * (n - 2.0 * gamma)) /
           std::tgamma(static_cast<double>(n) - gamma);
}

/// Quadrature of the left side of the I(gamma) identity at probe x (n = 2,3).
inline QuadResult riesz_identity_I_quadrature(int n, double gamma, const Point& x,
                                              const QuadratureConfig& cfg) {
    if (n != 2 && n != 3) throw std::invalid_argument("riesz_identity_I_quadrature: n must be 2 or 3");
    ScalarField base(
        n,
        [n, gamma](const Point& y) {
            return std::pow(1.0 + y.norm2(), gamma - static_cast<double>(n));
        },
        DecayHint(2.0 * (n - gamma), 1.0, 1.0));
    base.set_center_hint(Point::zero(n), true);
    return riesz_potential(base, x, 2.0 * gamma, 1.0, cfg);
}

/// Ball radius and normalization C_0 for the half-Laplacian Green's function.
struct GreenBallParams {
    double R = 1.0;
    double c0 = 1.0 / (2.0 * M_PI * M_PI);

    GreenBallParams() = default;
    explicit GreenBallParams(double radius) : R(radius) {
        if (!(R > 0.0)) throw std::invalid_argument("GreenBallParams: radius must be positive");
    }
    GreenBallParams(double radius, double c) : R(radius), c0(c) {
        if (!(R > 0.0)) throw std::invalid_argument("GreenBallParams: radius must be positive");
    }
};

/// C_0 = (1/2pi) (int_0^inf db/((1+b) sqrt b))^{-1} from the defining
/// improper integral; equals 1/(2 pi^2).
inline QuadResult green_c0_from_integral(const QuadratureConfig& cfg) {
    auto q = integrate_radial([](double b) { return 1.0 / ((1.0 + b) * std::sqrt(b)); }, 0.0,
                              std::numeric_limits<double>::infinity(), cfg);
    QuadResult out = q;
    out.value = 1.0 / (2.0 * M_PI * q.value);
    out.error_estimate = q.error_estimate / (2.0 * M_PI * q.value * q.value);
    return out;
}

/// Green's function of (-Delta)^{1/2} on the ball B_R(0):
///   G_R(x,y) = (C_0/|x-y|) int_0^{t_R/s_R} db/((1+b) sqrt b),
/// s_R = |x-y|^2/R^2, t_R = (1-|x|^2/R^2)(1-|y|^2/R^2); zero when either
/// argument leaves the ball. The inner integral is 2 arctan(sqrt(t_R/s_R)).
inline double green_half_ball(const GreenBallParams& params, const Point& x, const Point& y) {
    if (x.dim() != y.dim()) throw std::invalid_argument("green_half_ball: dimension mismatch");
    const double R2 = params.R * params.R;
    if (x.norm2() >= R2 || y.norm2() >= R2) return 0.0;
    const double d2 = (x - y).norm2();
    if (d2 == 0.0) throw std::invalid_argument("green_half_ball: x = y");
    const double sR = d2 / R2;
    const double tR = (1.0 - x.norm2() / R2) * (1.0 - y.norm2() / R2);
    return params.c0 / std::sqrt(d2) * 2.0 * std::atan(std::sqrt(tR / sR));
}

}  // namespace kelvin
