#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "kelvin/field.hpp"
#include "kelvin/geometry.hpp"
#include "kelvin/potentials.hpp"

namespace kelvin {

/// Parameters of the planar solution family
///   u = (6/p)^{1/4} (mu/(1+mu^2 |x-x0|^2))^{1/2},
///   v = (3/2p) ln[(6/p)^{1/6} mu / (1+mu^2 |x-x0|^2)].
struct Bubble2DParams {
    double p = 1.5;
    double mu = 1.0;
    Point center = Point(0.0, 0.0);

    Bubble2DParams() = default;
    Bubble2DParams(double p_, double mu_, Point c) : p(p_), mu(mu_), center(c) {
        if (!(p > 0.0) || !(mu > 0.0))
            throw std::invalid_argument("Bubble2DParams: p and mu must be positive");
        if (center.dim() != 2) throw std::invalid_argument("Bubble2DParams: center must be 2D");
    }
};

/// Derived constants of the planar family: the representation-formula slope
/// alpha = 3/p, the far-field amplitude beta, the additive constant gamma of
/// the log-potential formula (the value of v at the origin), and the three
/// closed-form integrals.
struct Bubble2DInvariants {
    double alpha = 0.0;        // 3/p
    double beta = 0.0;         // (6/p)^{1/4} / sqrt(mu)
    double gamma_const = 0.0;  // v(0)
    double total_u4 = 0.0;     // 6 pi / p
    double total_epv = 0.0;    // (6/p)^{1/4} 2 pi / sqrt(mu)
    double total_e4pv3 = 0.0;  // (6/p)^{1/3} pi
};

inline std::pair<double, double> bubble2d_eval(const Bubble2DParams& b, const Point& x) {
    const double d2 = (x - b.center).norm2();
    const double den = 1.0 + b.mu * b.mu * d2;
    const double u = std::pow(6.0 / b.p, 0.25) * std::sqrt(b.mu / den);
    const double v = 1.5 / b.p * std::log(std::pow(6.0 / b.p, 1.0 / 6.0) * b.mu / den);
    return {u, v};
}

inline Bubble2DInvariants bubble2d_invariants(const Bubble2DParams& b) {
    Bubble2DInvariants inv;
    inv.alpha = 3.0 / b.p;
    inv.beta = std::pow(6.0 / b.p, 0.25) / std::sqrt(b.mu);
    inv.gamma_const = bubble2d_eval(b, Point(0.0, 0.0)).second;
    inv.total_u4 = 6.0 * M_PI / b.p;
    inv.total_epv = std::pow(6.0 / b.p, 0.25) * 2.0 * M_PI / std::sqrt(b.mu);
    inv.total_e4pv3 = std::pow(6.0 / b.p, 1.0 / 3.0) * M_PI;
    return inv;
}

/// Parameters of the 3D family
///   u = C mu/(1+mu^2 |x-xbar|^2),   v = C' (mu/(1+mu^2 |x-xbar|^2))^{1/2},
/// with C = (2*3^{2(5-sigma)}/I(sigma/2))^{1/(24-5 sigma)} and
/// C' = (3*2^{5/2}/I(sigma/2)^{5/2})^{1/(24-5 sigma)}.
struct Bubble3DParams {
    double sigma = 2.0;
    double mu = 1.0;
    Point center = Point(0.0, 0.0, 0.0);
    double C = 0.0;
    double Cprime = 0.0;

    static Bubble3DParams make(double sigma, double mu, const Point& center) {
        if (!(sigma > 0.0 && sigma < 3.0))
            throw std::invalid_argument("Bubble3DParams: sigma must lie in (0,3)");
        if (!(mu > 0.0)) throw std::invalid_argument("Bubble3DParams: mu must be positive");
        if (center.dim() != 3) throw std::invalid_argument("Bubble3DParams: center must be 3D");
        Bubble3DParams b;
        b.sigma = sigma;
        b.mu = mu;
        b.center = center;
        const double I = riesz_identity_I(3, 0.5 * sigma);
        const double e = 1.0 / (24.0 - 5.0 * sigma);
        b.C = std::pow(2.0 * std::pow(3.0, 2.0 * (5.0 - sigma)) / I, e);
        b.Cprime = std::pow(3.0 * std::pow(2.0, 2.5) / std::pow(I, 2.5), e);
        return b;
    }
};

inline std::pair<double, double> bubble3d_eval(const Bubble3DParams& b, const Point& x) {
    const double den = 1.0 + b.mu * b.mu * (x - b.center).norm2();
    return {b.C * b.mu / den, b.Cprime * std::sqrt(b.mu / den)};
}

/// Conformal inversion data: x -> lambda^2 (x-x0)/|x-x0|^2 + x0 with the
/// multiplicative exponent nu. nu is data, not hard-coded: 1 for the 2D u,
/// 2 for the 3D u, 1 for the 3D v, sigma for the Hartree potential; the 2D v
/// uses the additive-log transform instead.
struct KelvinSpec {
    Point center;
    double lambda = 1.0;
    double nu = 1.0;

    KelvinSpec(Point c, double l, double exponent) : center(c), lambda(l), nu(exponent) {
        if (!(lambda > 0.0)) throw std::invalid_argument("KelvinSpec: lambda must be positive");
    }
};

inline Point kelvin_point(const Point& x, const KelvinSpec& spec) {
    if (x.dim() != spec.center.dim()) throw std::invalid_argument("kelvin_point: dimension mismatch");
    const Point d = x - spec.center;
    const double d2 = d.norm2();
    if (d2 == 0.0) throw std::invalid_argument("kelvin_point: x equals the inversion center");
    return spec.center + (spec.lambda * spec.lambda / d2) * d;
}

/// (lambda/|x-x0|)^nu f(x^{x0,lambda}).
inline double kelvin_field(const ScalarField& f, const KelvinSpec& spec, const Point& x) {
    const double d = distance(x, spec.center);
    if (d == 0.0) throw std::invalid_argument("kelvin_field: x equals the inversion center");
    return std::pow(spec.lambda / d, spec.nu) * f(kelvin_point(x, spec));
}

/// v(x^{x0,lambda}) + (3/p) ln(lambda/|x-x0|), the planar transform for v.
inline double kelvin_v_log(const ScalarField& v, double p, const KelvinSpec& spec, const Point& x) {
    if (!(p > 0.0)) throw std::invalid_argument("kelvin_v_log: p must be positive");
    const double d = distance(x, spec.center);
    if (d == 0.0) throw std::invalid_argument("kelvin_v_log: x equals the inversion center");
    return v(kelvin_point(x, spec)) + 3.0 / p * std::log(spec.lambda / d);
}

// field builders -------------------------------------------------------------

namespace detail {
inline double offset_factor(const Point& center) { return center.norm() > 0.0 ? 2.0 : 1.0; }
inline double hint_radius(const Point& center, double mu) {
    return 2.0 * center.norm() + 2.0 / mu;
}
}  // namespace detail

inline ScalarField bubble2d_u_field(const Bubble2DParams& b) {
    const double kappa = detail::offset_factor(b.center);
    const double beta = std::pow(6.0 / b.p, 0.25) / std::sqrt(b.mu);
    ScalarField f(
        2, [b](const Point& x) { return bubble2d_eval(b, x).first; },
        DecayHint(1.0, kappa * beta, detail::hint_radius(b.center, b.mu)));
    f.set_center_hint(b.center, true);
    f.set_feature_scale(1.0 / b.mu);
    return f;
}

inline ScalarField bubble2d_v_field(const Bubble2DParams& b) {
    // |v| grows like ln|x|; the hint records the sub-sqrt bound
    // |v| <= amp |x|^{1/2} for |x| >= 4, using ln(1+t) <= 2 sqrt(t)
    const double amp =
        1.5 / b.p *
        (5.0 + std::abs(std::log(std::pow(6.0 / b.p, 1.0 / 6.0) * b.mu)) + 2.0 * std::log1p(b.mu));
    ScalarField f(
        2, [b](const Point& x) { return bubble2d_eval(b, x).second; },
        DecayHint(-0.5, 2.0 * amp, std::max(4.0, detail::hint_radius(b.center, b.mu))));
    f.set_center_hint(b.center, true);
    f.set_feature_scale(1.0 / b.mu);
    return f;
}

inline ScalarField bubble2d_epv_field(const Bubble2DParams& b) {
    const double kappa = detail::offset_factor(b.center);
    const double coeff = std::pow(6.0 / b.p, 0.25) * std::pow(b.mu, -1.5);
    ScalarField f(
        2,
        [b](const Point& x) {
            const double den = 1.0 + b.mu * b.mu * (x - b.center).norm2();
            return std::pow(std::pow(6.0 / b.p, 1.0 / 6.0) * b.mu / den, 1.5);
        },
        DecayHint(3.0, std::pow(kappa, 3.0) * coeff, detail::hint_radius(b.center, b.mu)));
    f.set_center_hint(b.center, true);
    f.set_feature_scale(1.0 / b.mu);
    return f;
}

inline ScalarField bubble2d_u4_field(const Bubble2DParams& b) {
    const double kappa = detail::offset_factor(b.center);
    ScalarField f(
        2,
        [b](const Point& x) {
            const double den = 1.0 + b.mu * b.mu * (x - b.center).norm2();
            return 6.0 / b.p * b.mu * b.mu / (den * den);
        },
        DecayHint(4.0, std::pow(kappa, 4.0) * 6.0 / b.p / (b.mu * b.mu),
                  detail::hint_radius(b.center, b.mu)));
    f.set_center_hint(b.center, true);
    f.set_feature_scale(1.0 / b.mu);
    return f;
}

inline ScalarField bubble2d_e4pv3_field(const Bubble2DParams& b) {
    const double kappa = detail::offset_factor(b.center);
    ScalarField f(
        2,
        [b](const Point& x) {
            const double den = 1.0 + b.mu * b.mu * (x - b.center).norm2();
            const double base = std::pow(6.0 / b.p, 1.0 / 6.0) * b.mu / den;
            return base * base;
        },
        DecayHint(4.0, std::pow(kappa, 4.0) * std::pow(6.0 / b.p, 1.0 / 3.0) / (b.mu * b.mu),
                  detail::hint_radius(b.center, b.mu)));
    f.set_center_hint(b.center, true);
    f.set_feature_scale(1.0 / b.mu);
    return f;
}

inline ScalarField bubble3d_u_field(const Bubble3DParams& b) {
    const double kappa = detail::offset_factor(b.center);
    ScalarField f(
        3, [b](const Point& x) { return bubble3d_eval(b, x).first; },
        DecayHint(2.0, kappa * kappa * b.C / b.mu, detail::hint_radius(b.center, b.mu)));
    f.set_center_hint(b.center, true);
    f.set_feature_scale(1.0 / b.mu);
    return f;
}

inline ScalarField bubble3d_v_field(const Bubble3DParams& b) {
    const double kappa = detail::offset_factor(b.center);
    ScalarField f(
        3, [b](const Point& x) { return bubble3d_eval(b, x).second; },
        DecayHint(1.0, kappa * b.Cprime / std::sqrt(b.mu), detail::hint_radius(b.center, b.mu)));
    f.set_center_hint(b.center, true);
    f.set_feature_scale(1.0 / b.mu);
    return f;
}

inline ScalarField bubble3d_u52_field(const Bubble3DParams& b) {
    return field_power(bubble3d_u_field(b), 2.5);
}

/// Closed form of the Hartree potential of the 3D bubble:
///   P(y) = C'^{6-sigma} I(sigma/2) (mu/(1+mu^2 |y-xbar|^2))^{sigma/2}.
inline ScalarField bubble3d_hartree_field(const Bubble3DParams& b) {
    const double I = riesz_identity_I(3, 0.5 * b.sigma);
    const double amp = std::pow(b.Cprime, 6.0 - b.sigma) * I;
    const double kappa = detail::offset_factor(b.center);
    ScalarField f(
        3,
        [b, amp](const Point& y) {
            const double den = 1.0 + b.mu * b.mu * (y - b.center).norm2();
            return amp * std::pow(b.mu / den, 0.5 * b.sigma);
        },
        DecayHint(b.sigma, std::pow(kappa, b.sigma) * amp * std::pow(b.mu, -0.5 * b.sigma),
                  detail::hint_radius(b.center, b.mu)));
    f.set_center_hint(b.center, true);
    f.set_feature_scale(1.0 / b.mu);
    return f;
}

/// P * v^{4-sigma} of the 3D bubble in closed form; equals
/// I(sigma/2) C'^{10-2 sigma} (mu/(1+mu^2 |x-xbar|^2))^2.
inline ScalarField bubble3d_source_field(const Bubble3DParams& b) {
    const double I = riesz_identity_I(3, 0.5 * b.sigma);
    const double amp = I * std::pow(b.Cprime, 10.0 - 2.0 * b.sigma);
    const double kappa = detail::offset_factor(b.center);
    ScalarField f(
        3,
        [b, amp](const Point& x) {
            const double den = 1.0 + b.mu * b.mu * (x - b.center).norm2();
            const double q = b.mu / den;
            return amp * q * q;
        },
        DecayHint(4.0, std::pow(kappa, 4.0) * amp / (b.mu * b.mu),
                  detail::hint_radius(b.center, b.mu)));
    f.set_center_hint(b.center, true);
    f.set_feature_scale(1.0 / b.mu);
    return f;
}

// moving spheres --------------------------------------------------------------

/// Difference fields (w_u, w_v) of the moving-spheres method for the planar
/// family: Kelvin transform minus the field itself.
inline std::pair<double, double> msdiff(const Bubble2DParams& b, const KelvinSpec& spec,
                                        const Point& x) {
    ScalarField u = bubble2d_u_field(b), v = bubble2d_v_field(b);
    KelvinSpec su(spec.center, spec.lambda, 1.0);
    const double wu = kelvin_field(u, su, x) - u(x);
    const double wv = kelvin_v_log(v, b.p, spec, x) - v(x);
    return {wu, wv};
}

inline std::pair<double, double> msdiff(const Bubble3DParams& b, const KelvinSpec& spec,
                                        const Point& x) {
    ScalarField u = bubble3d_u_field(b), v = bubble3d_v_field(b);
    KelvinSpec su(spec.center, spec.lambda, 2.0);
    KelvinSpec sv(spec.center, spec.lambda, 1.0);
    return {kelvin_field(u, su, x) - u(x), kelvin_field(v, sv, x) - v(x)};
}

namespace detail {

template <class Params>
double msdiff_u(const Params& b, const Point& x0, double lambda, const Point& x) {
    KelvinSpec spec(x0, lambda, 1.0);
    return msdiff(b, spec, x).first;
}

template <class Params>
Point probe_direction(const Params& b, const Point& x0) {
    const Point d = b.center - x0;
    if (d.norm() > 1e-14) return (1.0 / d.norm()) * d;
    return unit_vector(x0.dim(), 0);
}

}  // namespace detail

/// Algebraic critical scale of the bubbles: sqrt(1 + mu^2 d^2)/mu with
/// d = |x0 - center|. Used as the oracle against the numerical search.
template <class Params>
double critical_scale_algebraic(const Params& b, const Point& x0) {
    const double d = distance(x0, b.center);
    return std::sqrt(1.0 + b.mu * b.mu * d * d) / b.mu;
}

/// Numerical critical scale: the unique lambda at which the difference field
/// w_u vanishes throughout B_lambda(x0), found by bracketing the (uniform)
/// interior sign of w_u and bisecting. The bracket starts from the algebraic
/// prediction [lambda_alg/2, 2 lambda_alg] and falls back to a geometric scan
/// of [1e-2, 1e2]. The result is validated against max |w_u| <= tol on an
/// interior probe ray.
template <class Params>
double critical_scale(const Params& b, const Point& x0, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("critical_scale: tol must be positive");
    const Point dir = detail::probe_direction(b, x0);
    auto sign_fn = [&](double lambda) {
        double worst = 0.0;
        for (double t : {0.25, 0.5, 0.75}) {
            const double w = detail::msdiff_u(b, x0, lambda, x0 + (t * lambda) * dir);
            if (std::abs(w) > std::abs(worst)) worst = w;
        }
        return worst;
    };

    double lo = 0.0, hi = 0.0, slo = 0.0;
    const double seed = critical_scale_algebraic(b, x0);
    {
        const double a = 0.5 * seed, c = 2.0 * seed;
        const double sa = sign_fn(a), sc = sign_fn(c);
        if (sa == 0.0) return a;
        if (sc == 0.0) return c;
        if (std::signbit(sa) != std::signbit(sc)) {
            lo = a;
            hi = c;
            slo = sa;
        }
    }
    if (hi == 0.0) {
        double prev = 1e-2, sprev = sign_fn(prev);
        for (int k = 1; k <= 64 && hi == 0.0; ++k) {
            const double lam = 1e-2 * std::pow(10.0, 4.0 * k / 64.0);
            const double s = sign_fn(lam);
            if (s == 0.0) return lam;
            if (sprev != 0.0 && std::signbit(s) != std::signbit(sprev)) {
                lo = prev;
                hi = lam;
                slo = sprev;
            }
            prev = lam;
            sprev = s;
        }
    }
    if (hi == 0.0) throw std::runtime_error("critical_scale: no sign change in [1e-2, 1e2]");

    for (int it = 0; it < 200 && (hi - lo) > 1e-14 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double s = sign_fn(mid);
        if (s == 0.0) {
            lo = hi = mid;
            break;
        }
        if (std::signbit(s) == std::signbit(slo))
            lo = mid;
        else
            hi = mid;
    }
    const double lambda = 0.5 * (lo + hi);

    double worst = 0.0;
    for (int i = 0; i < 16; ++i) {
        const double t = 0.05 + 0.9 * i / 15.0;
        const double w = detail::msdiff_u(b, x0, lambda, x0 + (t * lambda) * dir);
        worst = std::max(worst, std::abs(w));
    }
    if (worst > tol)
        throw std::runtime_error("critical_scale: residual difference field exceeds tolerance");
    return lambda;
}

// asymptotics -----------------------------------------------------------------

/// Fit of the far-field laws v ~ -alpha ln|x| and u ~ beta/|x| on the given
/// radii (all >= 100): alpha_hat = -mean v/ln|x|, beta_hat = mean |x| u.
inline std::pair<double, double> asymptotics_fit(const ScalarField& u, const ScalarField& v,
                                                 const std::vector<double>& radii) {
    if (radii.empty()) throw std::invalid_argument("asymptotics_fit: radii must be nonempty");
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] >= 100.0))
            throw std::invalid_argument("asymptotics_fit: radii must be >= 100");
        if (i > 0 && !(radii[i] > radii[i - 1]))
            throw std::invalid_argument("asymptotics_fit: radii must be increasing");
    }
    double alpha_acc = 0.0, beta_acc = 0.0;
    int count = 0;
    for (double r : radii)
        for (int k = 0; k < 8; ++k) {
            const double phi = 2.0 * M_PI * k / 8.0 + 0.1;
            const Point x = r * sphere_direction_2d(phi);
            alpha_acc += -v(x) / std::log(x.norm());
            beta_acc += x.norm() * u(x);
            ++count;
        }
    return {alpha_acc / count, beta_acc / count};
}

inline std::pair<double, double> asymptotics_fit(const Bubble2DParams& b,
                                                 const std::vector<double>& radii) {
    return asymptotics_fit(bubble2d_u_field(b), bubble2d_v_field(b), radii);
}

}  // namespace kelvin
