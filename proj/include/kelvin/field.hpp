#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "kelvin/geometry.hpp"

namespace kelvin {

/// Asserted power-law decay: |f(x)| <= coefficient * |x|^(-exponent) for
/// |x| >= valid_radius. The bound is what downstream tail handling relies on;
/// the coefficient is also used as the asymptotic amplitude when a tail
/// correction is added.
struct DecayHint {
    double exponent = 0.0;
    double coefficient = 0.0;
    double valid_radius = 1.0;

    DecayHint() = default;
    DecayHint(double a, double c, double r0) : exponent(a), coefficient(c), valid_radius(r0) {
        if (!(coefficient >= 0.0)) throw std::invalid_argument("DecayHint: coefficient must be >= 0");
        if (!(valid_radius > 0.0)) throw std::invalid_argument("DecayHint: valid_radius must be > 0");
    }
};

/// An evaluable scalar field on R^2 or R^3 plus the metadata quadrature needs:
/// a decay hint for tail handling, the points where the field is singular or
/// undefined, and (optionally) a center about which the field is radial.
/// Evaluation maps are pure; fields carry no mutable state and are safe to
/// evaluate concurrently.
class ScalarField {
public:
    using Eval = std::function<double(const Point&)>;

    ScalarField(int dim, Eval eval, DecayHint decay, std::vector<Point> singularities = {})
        : dim_(dim),
          eval_(std::move(eval)),
          decay_(decay),
          singularities_(std::move(singularities)) {
        if (dim_ != 2 && dim_ != 3)
            throw std::invalid_argument("ScalarField: dimension must be 2 or 3");
    }

    int dim() const { return dim_; }
    double operator()(const Point& x) const { return eval_(x); }
    const DecayHint& decay() const { return decay_; }
    const std::vector<Point>& singularities() const { return singularities_; }

    const std::optional<Point>& center_hint() const { return center_hint_; }
    bool radial() const { return radial_; }
    double feature_scale() const { return feature_scale_; }

    ScalarField& set_center_hint(const Point& c, bool is_radial = false) {
        center_hint_ = c;
        radial_ = is_radial;
        return *this;
    }
    ScalarField& set_feature_scale(double s) {
        if (!(s > 0.0)) throw std::invalid_argument("ScalarField: feature scale must be > 0");
        feature_scale_ = s;
        return *this;
    }

private:
    int dim_;
    Eval eval_;
    DecayHint decay_;
    std::vector<Point> singularities_;
    std::optional<Point> center_hint_;
    bool radial_ = false;
    double feature_scale_ = 1.0;
};

/// Field evaluating profile(|x - center|).
inline ScalarField make_radial_field(int dimension, std::function<double(double)> profile,
                                     const Point& center, const DecayHint& decay) {
    if (dimension != 2 && dimension != 3)
        throw std::invalid_argument("make_radial_field: dimension must be 2 or 3");
    if (center.dim() != dimension)
        throw std::invalid_argument("make_radial_field: center dimension mismatch");
    ScalarField f(
        dimension,
        [profile = std::move(profile), center](const Point& x) { return profile(distance(x, center)); },
        decay);
    f.set_center_hint(center, /*is_radial=*/true);
    return f;
}

/// Pointwise power f^q. The decay exponent multiplies by q; a negative base
/// with fractional exponent is a domain error at evaluation time.
inline ScalarField field_power(const ScalarField& f, double q) {
    const bool integral_q = (q == std::floor(q));
    DecayHint d(f.decay().exponent * q, std::pow(f.decay().coefficient, q), f.decay().valid_radius);
    ScalarField g(
        f.dim(),
        [f, q, integral_q](const Point& x) {
            const double base = f(x);
            if (base < 0.0 && !integral_q)
                throw std::domain_error("field_power: negative base with fractional exponent");
            return std::pow(base, q);
        },
        d, f.singularities());
    if (f.center_hint()) g.set_center_hint(*f.center_hint(), f.radial());
    g.set_feature_scale(f.feature_scale());
    return g;
}

/// a*f + b*g with the conservative combined decay hint.
inline ScalarField field_combine(double a, const ScalarField& f, double b, const ScalarField& g) {
    if (f.dim() != g.dim()) throw std::invalid_argument("field_combine: dimension mismatch");
    DecayHint d(std::min(f.decay().exponent, g.decay().exponent),
                std::abs(a) * f.decay().coefficient + std::abs(b) * g.decay().coefficient,
                std::max(f.decay().valid_radius, g.decay().valid_radius));
    std::vector<Point> sing = f.singularities();
    for (const auto& s : g.singularities()) sing.push_back(s);
    ScalarField h(
        f.dim(), [f, g, a, b](const Point& x) { return a * f(x) + b * g(x); }, d, std::move(sing));
    const bool same_center = f.center_hint() && g.center_hint() && *f.center_hint() == *g.center_hint();
    if (same_center) h.set_center_hint(*f.center_hint(), f.radial() && g.radial());
    h.set_feature_scale(std::min(f.feature_scale(), g.feature_scale()));
    return h;
}

/// f translated by t: x -> f(x - t).
inline ScalarField field_translate(const ScalarField& f, const Point& t) {
    std::vector<Point> sing;
    sing.reserve(f.singularities().size());
    for (const auto& s : f.singularities()) sing.push_back(s + t);
    DecayHint d = f.decay();
    // |x| >= 2|t| + 2 R0 implies |x - t| >= R0 and |x - t| >= |x|/2.
    d.valid_radius = 2.0 * t.norm() + 2.0 * d.valid_radius;
    d.coefficient = d.coefficient * std::pow(2.0, d.exponent);
    ScalarField g(
        f.dim(), [f, t](const Point& x) { return f(x - t); }, d, std::move(sing));
    if (f.center_hint()) g.set_center_hint(*f.center_hint() + t, f.radial());
    g.set_feature_scale(f.feature_scale());
    return g;
}

/// Spot check of the decay-hint bound on a deterministic probe set.
inline bool decay_hint_holds(const ScalarField& f, int n_radii = 6, int n_dirs = 8) {
    const DecayHint& d = f.decay();
    for (int i = 0; i < n_radii; ++i) {
        const double r = d.valid_radius * std::pow(4.0, i);
        for (int j = 0; j < n_dirs; ++j) {
            const double phi = 2.0 * M_PI * (j + 0.3) / n_dirs;
            Point x = f.dim() == 2 ? sphere_direction_2d(phi)
                                   : sphere_direction_3d(std::cos(phi * 0.5), phi);
            x = r * x;
            const double bound = d.coefficient * std::pow(r, -d.exponent);
            if (std::abs(f(x)) > bound * (1.0 + 1e-12)) return false;
        }
    }
    return true;
}

}  // namespace kelvin
