#pragma once

#include <cmath>
#include <stdexcept>

#include "kelvin/field.hpp"
#include "kelvin/potentials.hpp"
#include "kelvin/quadrature.hpp"

namespace kelvin {

/// Gap of the elementary Young-type inequality
///   a b <= e^a - a - 1 + b ln(b+1),  a, b >= 0.
inline double explogl_gap(double a, double b) {
    if (!(a >= 0.0) || !(b >= 0.0)) throw std::invalid_argument("explogl_gap: inputs must be >= 0");
    return (std::expm1(a) - a) + b * std::log1p(b) - a * b;
}

/// Sharper intermediate form: a b <= e^a - 1 - a + (b+1) ln(b+1) - b, which
/// dominates from below since (b+1) ln(b+1) - b <= b ln(b+1).
inline double explogl_gap_sharp(double a, double b) {
    if (!(a >= 0.0) || !(b >= 0.0))
        throw std::invalid_argument("explogl_gap_sharp: inputs must be >= 0");
    return (std::expm1(a) - a) + (b + 1.0) * std::log1p(b) - b - a * b;
}

/// The two Orlicz-type "norms" of the pairing inequality.
struct OrliczPair {
    double expL_norm = 0.0;  // int (e^|f| - |f| - 1)
    double LlnL_norm = 0.0;  // int |g| ln(|g| + 1)
};

struct OrliczResult {
    OrliczPair pair;
    double product_integral = 0.0;  // int |f g|
    double slack = 0.0;             // expL + LlnL - product (contract: >= 0)
    bool converged = true;
};

/// The three integrals of the pairing inequality over the ball of the given
/// radius. The paper applies the inequality on bounded neighborhoods, so the
/// domain is an explicit ball.
inline OrliczResult orlicz_pair(const ScalarField& f, const ScalarField& g, double domain_radius,
                                const QuadratureConfig& cfg) {
    if (f.dim() != g.dim()) throw std::invalid_argument("orlicz_pair: dimension mismatch");
    if (!(domain_radius > 0.0))
        throw std::invalid_argument("orlicz_pair: domain radius must be positive");
    QuadratureConfig ball_cfg = cfg;
    ball_cfg.truncation_radius = domain_radius;

    auto inherit = [](ScalarField h, const ScalarField& src) {
        if (src.center_hint()) h.set_center_hint(*src.center_hint(), src.radial());
        h.set_feature_scale(src.feature_scale());
        return h;
    };
    std::vector<Point> sing = f.singularities();
    for (const auto& s : g.singularities()) sing.push_back(s);

    ScalarField expf = inherit(ScalarField(
                                   f.dim(),
                                   [f](const Point& x) {
                                       const double a = std::abs(f(x));
                                       return std::expm1(a) - a;
                                   },
                                   DecayHint(0.0, 0.0, 1.0), f.singularities()),
                               f);
    ScalarField glng = inherit(ScalarField(
                                   g.dim(),
                                   [g](const Point& x) {
                                       const double b = std::abs(g(x));
                                       return b * std::log1p(b);
                                   },
                                   DecayHint(0.0, 0.0, 1.0), g.singularities()),
                               g);
    ScalarField prod(f.dim(), [f, g](const Point& x) { return std::abs(f(x) * g(x)); },
                     DecayHint(0.0, 0.0, 1.0), sing);
    const bool same_center = f.center_hint() && g.center_hint() &&
                             distance(*f.center_hint(), *g.center_hint()) < 1e-14;
    if (same_center) prod.set_center_hint(*f.center_hint(), f.radial() && g.radial());
    prod.set_feature_scale(std::min(f.feature_scale(), g.feature_scale()));

    OrliczResult out;
    auto qe = integrate_space(expf, ball_cfg);
    auto ql = integrate_space(glng, ball_cfg);
    auto qp = integrate_space(prod, ball_cfg);
    out.pair.expL_norm = qe.value;
    out.pair.LlnL_norm = ql.value;
    out.product_integral = qp.value;
    out.slack = qe.value + ql.value - qp.value;
    out.converged = qe.converged && ql.converged && qp.converged;
    return out;
}

struct HlsRatio {
    double value = 0.0;
    bool zero_over_zero = false;
};

/// Empirical Hardy-Littlewood-Sobolev ratio
///   || int f(y)/|x-y|^{n-s} dy ||_q  /  || f ||_p,   s + n/q = n/p,
/// an estimate of the pairing constant, never a sharp-constant verdict. The
/// field is normalized internally by its peak magnitude so the quadrature
/// meshes (hence the reported ratio) are exactly invariant under f -> c f.
inline HlsRatio hls_ratio(const ScalarField& f, int n, double s, double p, double q,
                          const QuadratureConfig& cfg) {
    if (f.dim() != n) throw std::invalid_argument("hls_ratio: dimension mismatch");
    if (!(s > 0.0 && s < n)) throw std::invalid_argument("hls_ratio: s must lie in (0, n)");
    if (!(1.0 < p && p < q)) throw std::invalid_argument("hls_ratio: need 1 < p < q");
    if (std::abs(s + n / q - n / p) > 1e-12)
        throw std::invalid_argument("hls_ratio: exponent relation s + n/q = n/p violated");

    double peak = 0.0;
    for (double r : {0.0, 0.3, 0.7, 1.3, 2.6}) {
        const Point c = f.center_hint() ? *f.center_hint() : Point::zero(n);
        peak = std::max(peak, std::abs(f(c.shifted(0, r * f.feature_scale()))));
        peak = std::max(peak, std::abs(f(c.shifted(n - 1, -r * f.feature_scale()))));
    }
    if (peak == 0.0) return {0.0, true};

    DecayHint dn = f.decay();
    dn.coefficient /= peak;
    ScalarField fnorm(f.dim(), [f, peak](const Point& x) { return f(x) / peak; }, dn,
                      f.singularities());
    if (f.center_hint()) fnorm.set_center_hint(*f.center_hint(), f.radial());
    fnorm.set_feature_scale(f.feature_scale());

    QuadratureConfig inner = cfg;
    inner.rel_tol = std::max(cfg.rel_tol, 1e-6);

    // |f|^p and its integral
    ScalarField fp(
        n, [fnorm, p](const Point& x) { return std::pow(std::abs(fnorm(x)), p); },
        DecayHint(dn.exponent * p, std::pow(dn.coefficient, p), dn.valid_radius),
        fnorm.singularities());
    if (fnorm.center_hint()) fp.set_center_hint(*fnorm.center_hint(), fnorm.radial());
    fp.set_feature_scale(fnorm.feature_scale());
    auto qfp = integrate_space(fp, cfg);
    if (!(qfp.value > 0.0)) return {0.0, true};

    // coarse L1 magnitude for the outer decay hint
    ScalarField fabs(
        n, [fnorm](const Point& x) { return std::abs(fnorm(x)); }, dn, fnorm.singularities());
    if (fnorm.center_hint()) fabs.set_center_hint(*fnorm.center_hint(), fnorm.radial());
    fabs.set_feature_scale(fnorm.feature_scale());
    QuadratureConfig coarse = cfg;
    coarse.rel_tol = 1e-3;
    const double m1 = integrate_space(fabs, coarse).value;

    // Riesz potential of fnorm, raised to the q-th power
    const double kernel_power = n - s;
    ScalarField outer(
        n,
        [fnorm, kernel_power, q, inner](const Point& x) {
            const double val = riesz_potential(fnorm, x, kernel_power, 1.0, inner).value;
            return std::pow(std::abs(val), q);
        },
        DecayHint((n - s) * q, std::pow(2.0, (n - s) * q) * std::pow(m1, q),
                  2.0 * dn.valid_radius),
        {});
    if (fnorm.center_hint()) outer.set_center_hint(*fnorm.center_hint(), fnorm.radial());
    outer.set_feature_scale(fnorm.feature_scale());
    QuadratureConfig outer_cfg = cfg;
    outer_cfg.rel_tol = std::max(cfg.rel_tol, 1e-5);
    auto qout = integrate_space(outer, outer_cfg);

    HlsRatio out;
    out.value = std::pow(qout.value, 1.0 / q) / std::pow(qfp.value, 1.0 / p);
    return out;
}

}  // namespace kelvin
