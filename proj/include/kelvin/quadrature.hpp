#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "kelvin/field.hpp"
#include "kelvin/geometry.hpp"

namespace kelvin {

/// Tolerances and schedules for all integration routines.
///
/// truncation_radius = 0 means "auto": the truncation radius is chosen from
/// the integrand's decay hint so the analytic tail bound stays below
/// rel_tol/10 of the running value, and the tail correction itself is added
/// analytically.
///
/// pv_epsilons is the decreasing exclusion-radius schedule for principal-value
/// integrals (Richardson-extrapolated assuming a leading O(eps) error). The
/// same schedule doubles as the y -> 0+ schedule of the harmonic-extension
/// evaluation of the half-Laplacian.
struct QuadratureConfig {
    double rel_tol = 1e-7;
    double abs_tol = 1e-11;
    double truncation_radius = 0.0;
    std::vector<double> pv_epsilons = {0.08, 0.04, 0.02};
    int max_subdivisions = 4000;

    void validate() const {
        if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
            throw std::invalid_argument("QuadratureConfig: tolerances must be positive");
        if (!(truncation_radius >= 0.0))
            throw std::invalid_argument("QuadratureConfig: truncation_radius must be >= 0");
        if (max_subdivisions <= 0)
            throw std::invalid_argument("QuadratureConfig: max_subdivisions must be positive");
        if (pv_epsilons.size() < 2)
            throw std::invalid_argument("QuadratureConfig: need at least 2 pv exclusion radii");
        for (std::size_t i = 0; i < pv_epsilons.size(); ++i) {
            if (!(pv_epsilons[i] > 0.0))
                throw std::invalid_argument("QuadratureConfig: pv_epsilons must be positive");
            if (i > 0 && !(pv_epsilons[i] < pv_epsilons[i - 1]))
                throw std::invalid_argument("QuadratureConfig: pv_epsilons must be strictly decreasing");
        }
    }
};

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;
    double tail_correction = 0.0;
    long long evaluations = 0;
    bool converged = true;
    std::string message;
};

namespace detail {

// 15-point Kronrod / 7-point Gauss nodes and weights (QUADPACK dqk15).
inline constexpr double kGK15Nodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kGK15WeightsK[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kGK15WeightsG[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a, b;
    double value, error;
};

template <class F>
Panel gk15_panel(F&& f, double a, double b, long long& evals) {
    const double center = 0.5 * (a + b);
    const double hlgth = 0.5 * (b - a);

    double fv1[7], fv2[7];
    const double fc = f(center);
    double resg = kGK15WeightsG[3] * fc;
    double resk = kGK15WeightsK[7] * fc;
    double resabs = std::abs(resk);
    for (int j = 0; j < 7; ++j) {
        const double dx = hlgth * kGK15Nodes[j];
        fv1[j] = f(center - dx);
        fv2[j] = f(center + dx);
        const double fsum = fv1[j] + fv2[j];
        if (j % 2 == 1) resg += kGK15WeightsG[(j - 1) / 2] * fsum;
        resk += kGK15WeightsK[j] * fsum;
        resabs += kGK15WeightsK[j] * (std::abs(fv1[j]) + std::abs(fv2[j]));
    }
    evals += 15;

    const double reskh = resk * 0.5;
    double resasc = kGK15WeightsK[7] * std::abs(fc - reskh);
    for (int j = 0; j < 7; ++j)
        resasc += kGK15WeightsK[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));

    const double value = resk * hlgth;
    resabs *= std::abs(hlgth);
    resasc *= std::abs(hlgth);
    double err = std::abs((resk - resg) * hlgth);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double eps = std::numeric_limits<double>::epsilon();
    const double uflow = std::numeric_limits<double>::min();
    if (resabs > uflow / (50.0 * eps)) err = std::max(eps * 50.0 * resabs, err);
    return Panel{a, b, value, err};
}

struct Quad1D {
    double value = 0.0;
    double error = 0.0;
    bool converged = true;
};

// Adaptive bisection with a worst-error-first queue. The final value is a
// Kahan sum over panels sorted by left endpoint, so the result does not
// depend on refinement history bookkeeping.
template <class F>
Quad1D adaptive_1d(F&& f, std::vector<double> breaks, double rel_tol, double abs_tol,
                   int max_subdivisions, long long& evals) {
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    if (breaks.size() < 2) return {};

    auto cmp = [](const Panel& x, const Panel& y) { return x.error < y.error; };
    std::priority_queue<Panel, std::vector<Panel>, decltype(cmp)> heap(cmp);
    std::vector<Panel> done;

    double total_val = 0.0, total_err = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        Panel p = gk15_panel(f, breaks[i], breaks[i + 1], evals);
        total_val += p.value;
        total_err += p.error;
        heap.push(p);
    }

    int splits = 0;
    const double width_floor = 4.0 * std::numeric_limits<double>::epsilon();
    while (total_err > std::max(abs_tol, rel_tol * std::abs(total_val)) &&
           splits < max_subdivisions && !heap.empty()) {
        Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid - worst.a <= width_floor * std::max(1.0, std::abs(mid))) {
            done.push_back(worst);  // cannot refine further at double precision
            continue;
        }
        Panel l = gk15_panel(f, worst.a, mid, evals);
        Panel r = gk15_panel(f, mid, worst.b, evals);
        total_val += l.value + r.value - worst.value;
        total_err += l.error + r.error - worst.error;
        heap.push(l);
        heap.push(r);
        ++splits;
    }

    while (!heap.empty()) {
        done.push_back(heap.top());
        heap.pop();
    }
    std::sort(done.begin(), done.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });

    double sum = 0.0, comp = 0.0, err = 0.0;
    for (const Panel& p : done) {
        const double t = p.value - comp;
        const double s = sum + t;
        comp = (s - sum) - t;
        sum = s;
        err += p.error;
    }
    Quad1D out;
    out.value = sum;
    out.error = err;
    out.converged = err <= std::max(abs_tol, rel_tol * std::abs(sum)) * 1.0000001 ||
                    err <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(sum);
    return out;
}

// Tanh-sinh rule on [a, b] for integrands with integrable endpoint
// singularities; level-doubling until the value settles. Node positions near
// the endpoints are computed from the stable endpoint distance so severe
// singularities keep full precision.
template <class F>
Quad1D tanh_sinh_panel(F&& f, double a, double b, double rel_tol, double abs_tol, long long& evals) {
    Quad1D out;
    if (a == b) return out;
    const double w = 0.5 * (b - a);
    const double u_cap = 6.0;

    auto term = [&](double u) -> double {
        const double s = 0.5 * M_PI * std::sinh(u);
        if (std::abs(s) > 340.0) return 0.0;
        const double e = std::exp(-2.0 * std::abs(s));
        const double delta = w * 2.0 * e / (1.0 + e);  // w * (1 - |tanh(s)|)
        if (!(delta > 0.0)) return 0.0;
        const double x = (u >= 0.0) ? b - delta : a + delta;
        const double ch = std::cosh(s);
        const double dxdu = w * 0.5 * M_PI * std::cosh(u) / (ch * ch);
        evals += 1;
        return f(x) * dxdu;
    };

    double h = 0.5;
    double sum = term(0.0);
    for (int side = -1; side <= 1; side += 2) {
        int quiet = 0;
        for (int k = 1; k * h <= u_cap; ++k) {
            const double t = term(side * k * h);
            sum += t;
            if (std::abs(t) <= 1e-17 * (std::abs(sum) + 1e-300)) {
                if (++quiet >= 3) break;
            } else
                quiet = 0;
        }
    }
    double prev = h * sum;
    double prev_diff = std::abs(prev);
    for (int level = 1; level <= 9; ++level) {
        h *= 0.5;
        for (int side = -1; side <= 1; side += 2) {
            int quiet = 0;
            for (int k = 1; k * h <= u_cap; k += 2) {
                const double t = term(side * k * h);
                sum += t;
                if (std::abs(t) <= 1e-17 * (std::abs(sum) + 1e-300)) {
                    if (++quiet >= 3) break;
                } else
                    quiet = 0;
            }
        }
        const double cur = h * sum;
        const double diff = std::abs(cur - prev);
        prev = cur;
        if (level >= 2 && diff <= std::max(abs_tol, rel_tol * std::abs(cur))) {
            out.value = cur;
            out.error = std::max(diff, 2.0 * std::numeric_limits<double>::epsilon() * std::abs(cur));
            return out;
        }
        prev_diff = diff;
    }
    out.value = prev;
    out.error = prev_diff;
    out.converged = prev_diff <= std::max(abs_tol, rel_tol * std::abs(prev)) * 1.0000001;
    return out;
}

// Composite driver: GK-adaptive over the break intervals, with the first/last
// interval handled by tanh-sinh when flagged as endpoint-singular.
template <class F>
Quad1D integrate_1d_core(F&& f, std::vector<double> breaks, bool sing_lo, bool sing_hi,
                         double rel_tol, double abs_tol, int max_subdivisions, long long& evals) {
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    if (breaks.size() < 2) return {};

    Quad1D total;
    std::size_t lo_idx = 0, hi_idx = breaks.size() - 1;
    const double part_abs = abs_tol / 3.0;
    if (sing_lo && breaks.size() >= 2) {
        auto q = tanh_sinh_panel(f, breaks[0], breaks[1], rel_tol, part_abs, evals);
        total.value += q.value;
        total.error += q.error;
        total.converged = total.converged && q.converged;
        ++lo_idx;
    }
    if (sing_hi && hi_idx > lo_idx) {
        auto q = tanh_sinh_panel(f, breaks[hi_idx - 1], breaks[hi_idx], rel_tol, part_abs, evals);
        total.value += q.value;
        total.error += q.error;
        total.converged = total.converged && q.converged;
        --hi_idx;
    }
    if (hi_idx > lo_idx) {
        std::vector<double> mid(breaks.begin() + lo_idx, breaks.begin() + hi_idx + 1);
        auto q = adaptive_1d(f, std::move(mid), rel_tol, part_abs, max_subdivisions, evals);
        total.value += q.value;
        total.error += q.error;
        total.converged = total.converged && q.converged;
    }
    return total;
}

// Map [A, inf) to t in (0, 1]: r = A + s (1 - t)/t.
template <class F>
Quad1D integrate_mapped_tail(F&& f, double A, double scale, double rel_tol, double abs_tol,
                             int max_subdivisions, long long& evals) {
    const double s = std::max({1.0, std::abs(A), scale});
    auto g = [&f, A, s](double t) {
        const double r = A + s * (1.0 - t) / t;
        return f(r) * s / (t * t);
    };
    std::vector<double> breaks = {0.0, 0.01, 0.1, 0.5, 1.0};
    return integrate_1d_core(g, std::move(breaks), /*sing_lo=*/true, /*sing_hi=*/false, rel_tol,
                             abs_tol, max_subdivisions, evals);
}

// Gauss-Legendre nodes/weights on [-1, 1], cached per order.
inline const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int m) {
    static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;

    std::vector<double> x(m), w(m);
    for (int i = 0; i < (m + 1) / 2; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (m + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < m; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = m * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[i] = -z;
        x[m - 1 - i] = z;
        w[i] = w[m - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
    }
    return cache.emplace(m, std::make_pair(std::move(x), std::move(w))).first->second;
}

struct AngularMean {
    double mean = 0.0;
    double error = 0.0;
};

// Mean over S^1 of h(direction), midpoint-offset trapezoid with doubling.
// Exact for harmonics below the node count, so odd integrand parts cancel.
template <class H>
AngularMean angular_mean_2d(H&& h, double rel_tol, long long& evals, int m_start = 16,
                            int m_max = 2048) {
    const double offset = 0.37;
    int m = m_start;
    double sum = 0.0;
    for (int j = 0; j < m; ++j) sum += h(sphere_direction_2d(offset + 2.0 * M_PI * j / m));
    evals += m;
    double mean = sum / m;
    AngularMean out{mean, std::abs(mean)};
    while (m < m_max) {
        double add = 0.0;
        for (int j = 0; j < m; ++j)
            add += h(sphere_direction_2d(offset + 2.0 * M_PI * (j + 0.5) / m));
        evals += m;
        sum += add;
        m *= 2;
        const double mean2 = sum / m;
        out.error = std::abs(mean2 - mean);
        mean = mean2;
        out.mean = mean;
        if (out.error <= rel_tol * std::abs(mean) + 1e-305) break;
    }
    return out;
}

// Mean over S^2: Gauss-Legendre in cos(theta) x trapezoid in phi, doubling.
template <class H>
AngularMean angular_mean_3d(H&& h, double rel_tol, long long& evals, int m_start = 6,
                            int m_max = 96) {
    const double offset = 0.37;
    double prev = std::numeric_limits<double>::quiet_NaN();
    AngularMean out;
    for (int m = m_start; m <= m_max; m *= 2) {
        const auto& [xs, ws] = gauss_legendre(m);
        const int mphi = 2 * m;
        double acc = 0.0;
        for (int i = 0; i < m; ++i) {
            double ring = 0.0;
            for (int j = 0; j < mphi; ++j)
                ring += h(sphere_direction_3d(xs[i], offset + 2.0 * M_PI * j / mphi));
            acc += ws[i] * ring;
        }
        evals += m * mphi;
        const double mean = acc / (2.0 * mphi);
        if (!std::isnan(prev)) {
            out.error = std::abs(mean - prev);
            out.mean = mean;
            if (out.error <= rel_tol * std::abs(mean) + 1e-305) return out;
        } else {
            out.mean = mean;
            out.error = std::abs(mean);
        }
        prev = mean;
    }
    return out;
}

// Polynomial (Neville) extrapolation of v(eps) to eps = 0, depth-capped so
// noise is not amplified. spread (deepest minus previous extrapolant) is the
// error proxy; prev_spread is the same one level up, so spread/prev_spread
// near or above 1 signals a sequence that is not converging.
struct RichardsonLimit {
    double value = 0.0;
    double spread = 0.0;
    double prev_spread = 0.0;
};

inline RichardsonLimit richardson_limit(const std::vector<double>& values,
                                        const std::vector<double>& eps) {
    const std::size_t m = values.size();
    std::vector<std::vector<double>> T(m, std::vector<double>(m, 0.0));
    for (std::size_t i = 0; i < m; ++i) T[i][0] = values[i];
    const std::size_t depth = std::min<std::size_t>(m - 1, 3);
    for (std::size_t j = 1; j <= depth; ++j)
        for (std::size_t i = j; i < m; ++i)
            T[i][j] = (eps[i - j] * T[i][j - 1] - eps[i] * T[i - 1][j - 1]) / (eps[i - j] - eps[i]);
    RichardsonLimit out;
    out.value = T[m - 1][depth];
    out.spread = depth >= 1 ? std::abs(out.value - T[m - 1][depth - 1])
                            : std::abs(values.back() - values.front());
    out.prev_spread = depth >= 2 ? std::abs(T[m - 1][depth - 1] - T[m - 2][depth - 1])
                                 : std::abs(values.back() - values.front());
    return out;
}

// C-infinity bump: 1 on [0, rho/2], 0 beyond rho, glued with the classic
// e^{-1/t} transition so masked integrands stay smooth for the panel rules.
inline double radial_bump(double r, double rho) {
    if (r <= 0.5 * rho) return 1.0;
    if (r >= rho) return 0.0;
    const double t = (r - 0.5 * rho) / (0.5 * rho);
    const double a = std::exp(-1.0 / t);
    const double b = std::exp(-1.0 / (1.0 - t));
    return b / (a + b);
}

// Mean over S^{n-1} of a function invariant under rotations about `axis`
// (unit vector): a 1D Gauss-Legendre integral in the cosine of the polar
// angle, with order doubling for the error estimate.
template <class H>
AngularMean angular_mean_axial(H&& h, int dim, const Point& axis, double rel_tol, long long& evals,
                               int m_start = 8, int m_max = 256) {
    // orthonormal companion to the axis
    Point ea = Point::zero(dim);
    if (dim == 2) {
        ea = Point(-axis[1], axis[0]);
    } else {
        const double ax = std::abs(axis[0]);
        Point trial = ax < 0.9 ? Point(1.0, 0.0, 0.0) : Point(0.0, 1.0, 0.0);
        const double proj = dot(trial, axis);
        ea = trial - proj * axis;
        ea = (1.0 / ea.norm()) * ea;
    }

    double prev = std::numeric_limits<double>::quiet_NaN();
    AngularMean out;
    for (int m = m_start; m <= m_max; m *= 2) {
        double acc = 0.0;
        if (dim == 3) {
            const auto& [xs, ws] = gauss_legendre(m);
            for (int i = 0; i < m; ++i) {
                const double t = xs[i];
                const double st = std::sqrt(std::max(0.0, 1.0 - t * t));
                acc += ws[i] * h(t * axis + st * ea);
            }
            acc *= 0.5;  // GL weights sum to 2, sphere mean carries 1/2
        } else {
            // even symmetry about the axis: midpoint rule on the half circle
            for (int i = 0; i < m; ++i) {
                const double t = M_PI * (i + 0.5) / m;
                acc += h(std::cos(t) * axis + std::sin(t) * ea);
            }
            acc /= m;
        }
        evals += m;
        if (!std::isnan(prev)) {
            out.error = std::abs(acc - prev);
            out.mean = acc;
            if (out.error <= rel_tol * std::abs(acc) + 1e-305) return out;
        } else {
            out.mean = acc;
            out.error = std::abs(acc);
        }
        prev = acc;
    }
    return out;
}

struct PolarSpec {
    Point center;
    bool radial_shortcut = false;
    std::vector<double> radial_breaks;  // candidate breakpoints, pre-clamp
    std::optional<Point> axis;          // unit axis of rotational symmetry, if any
};

// Integral over the spherical shell r in [r_lo, r_hi] around spec.center of
// h(y, r), via radial quadrature of angular means. The exact shell radius is
// handed to the integrand so kernels centered at spec.center never lose it to
// cancellation when y = center + r w rounds back onto the center.
template <class H>
Quad1D polar_shell_integral(H&& h, const PolarSpec& spec, int dim, double r_lo, double r_hi,
                            const QuadratureConfig& cfg, double rel_tol, double abs_tol,
                            long long& evals) {
    const double surf_coeff = unit_sphere_area(dim);
    const double ang_rel = std::max(1e-9, 0.05 * rel_tol);
    // below this radius a kernel r^{-power} with power < dim could overflow a
    // double; the omitted shell mass is <= r_floor^{dim - power} <= 1e-10
    const double r_floor = 1e-100;
    auto radial_fn = [&](double r) -> double {
        if (r < r_floor) return 0.0;
        AngularMean am;
        if (spec.radial_shortcut) {
            am.mean = h(spec.center + r * unit_vector(dim, 0), r);
            am.error = 0.0;
            evals += 1;
        } else if (spec.axis) {
            am = angular_mean_axial([&](const Point& w) { return h(spec.center + r * w, r); }, dim,
                                    *spec.axis, ang_rel, evals);
        } else if (dim == 2) {
            am = angular_mean_2d([&](const Point& w) { return h(spec.center + r * w, r); }, ang_rel,
                                 evals);
        } else {
            am = angular_mean_3d([&](const Point& w) { return h(spec.center + r * w, r); }, ang_rel,
                                 evals);
        }
        const double jac = dim == 2 ? r : r * r;
        return surf_coeff * jac * am.mean;
    };
    std::vector<double> breaks = {r_lo, r_hi};
    for (double b : spec.radial_breaks)
        if (b > r_lo && b < r_hi) breaks.push_back(b);
    // octave seeding so wide ranges start resolved
    const double seed0 = r_lo > 0.0 ? r_lo : std::min(1.0, 0.25 * r_hi);
    for (double b = seed0; b < r_hi; b *= 8.0)
        if (b > r_lo) breaks.push_back(b);
    const bool sing_lo = (r_lo == 0.0);
    return integrate_1d_core(radial_fn, std::move(breaks), sing_lo, /*sing_hi=*/false, rel_tol,
                             abs_tol, cfg.max_subdivisions, evals);
}

}  // namespace detail

/// Adaptive integration of g over (r_lo, r_hi), r_hi possibly infinite.
/// With an infinite upper limit: a decay hint triggers auto-truncation with an
/// analytic power-law tail correction (requires exponent > 1); without one the
/// far range is integrated under the inverse map u = 1/r.
inline QuadResult integrate_radial(const std::function<double(double)>& g, double r_lo, double r_hi,
                                   const QuadratureConfig& cfg,
                                   std::optional<DecayHint> tail = std::nullopt) {
    cfg.validate();
    QuadResult out;
    if (!(r_lo >= 0.0) || std::isnan(r_hi)) throw std::invalid_argument("integrate_radial: bad bounds");
    if (r_lo == r_hi) return out;
    if (r_hi < r_lo) throw std::invalid_argument("integrate_radial: r_hi < r_lo");

    long long evals = 0;
    if (std::isfinite(r_hi)) {
        const double span = r_hi - r_lo;
        std::vector<double> breaks = {r_lo, r_lo + 0.35 * span, r_lo + 0.85 * span, r_hi};
        auto q = detail::integrate_1d_core(g, std::move(breaks), true, true, cfg.rel_tol,
                                           cfg.abs_tol, cfg.max_subdivisions, evals);
        out.value = q.value;
        out.error_estimate = q.error;
        out.converged = q.converged;
        if (!q.converged) out.message = "integrate_radial: subdivision budget exhausted";
        out.evaluations = evals;
        return out;
    }

    if (tail) {
        const double a = tail->exponent;
        if (!(a > 1.0)) {
            out.converged = false;
            out.message = "integrate_radial: tail exponent <= 1, integral not truncatable";
            return out;
        }
        const double c = tail->coefficient;
        const double R1 = std::max({4.0 * tail->valid_radius, 2.0 * r_lo, 1.0});
        long long coarse_evals = 0;
        auto coarse = detail::integrate_1d_core(g, {r_lo, 0.5 * R1, R1}, true, false, 1e-3,
                                                cfg.abs_tol, 200, coarse_evals);
        const double target =
            std::max(cfg.abs_tol, cfg.rel_tol * std::abs(coarse.value)) / 10.0;
        double Rt = R1;
        if (c > 0.0) {
            Rt = std::pow(c / ((a - 1.0) * target), 1.0 / (a - 1.0));
            Rt = std::min(std::max(Rt, R1), 1e300);
        }
        std::vector<double> breaks = {r_lo, 0.5 * R1, R1, Rt};
        for (double b = 8.0 * R1; b < Rt; b *= 8.0) breaks.push_back(b);
        auto q = detail::integrate_1d_core(g, std::move(breaks), true, false, cfg.rel_tol,
                                           cfg.abs_tol, cfg.max_subdivisions, evals);
        const double corr = c * std::pow(Rt, 1.0 - a) / (a - 1.0);
        out.value = q.value + corr;
        out.tail_correction = corr;
        out.error_estimate = q.error + corr;
        out.converged = q.converged;
        if (!q.converged) out.message = "integrate_radial: subdivision budget exhausted";
        out.evaluations = evals + coarse_evals;
        return out;
    }

    const double B = std::max(1.0, 2.0 * r_lo + 1.0);
    auto near = detail::integrate_1d_core(g, {r_lo, 0.5 * (r_lo + B), B}, true, false, cfg.rel_tol,
                                          0.5 * cfg.abs_tol, cfg.max_subdivisions, evals);
    auto far = detail::integrate_mapped_tail(g, B, 1.0, cfg.rel_tol, 0.5 * cfg.abs_tol,
                                             cfg.max_subdivisions, evals);
    out.value = near.value + far.value;
    out.error_estimate = near.error + far.error;
    out.converged = near.converged && far.converged;
    if (!out.converged) out.message = "integrate_radial: subdivision budget exhausted";
    out.evaluations = evals;
    return out;
}

namespace detail {

struct SpacePlan {
    Point center;
    std::vector<Point> secondary;     // singular points handled by bump extraction
    std::vector<double> bump_radii;
    bool radial_shortcut = false;
    std::vector<double> radial_breaks;
};

inline SpacePlan plan_space(const ScalarField& f, const Point* forced_center = nullptr) {
    SpacePlan plan;
    const int n = f.dim();
    if (forced_center)
        plan.center = *forced_center;
    else if (!f.singularities().empty())
        plan.center = f.singularities().front();
    else if (f.center_hint())
        plan.center = *f.center_hint();
    else
        plan.center = Point::zero(n);

    const std::size_t first = forced_center ? 0 : 1;
    for (std::size_t i = first; i < f.singularities().size(); ++i) {
        const Point& s = f.singularities()[i];
        if (distance(s, plan.center) < 1e-14) continue;
        plan.secondary.push_back(s);
    }
    for (std::size_t i = 0; i < plan.secondary.size(); ++i) {
        double rho = distance(plan.secondary[i], plan.center);
        for (std::size_t j = 0; j < plan.secondary.size(); ++j)
            if (i != j) rho = std::min(rho, distance(plan.secondary[i], plan.secondary[j]));
        plan.bump_radii.push_back(rho / 3.0);
    }

    plan.radial_shortcut = f.radial() && f.center_hint() &&
                           distance(*f.center_hint(), plan.center) < 1e-14 &&
                           plan.secondary.empty();

    const double s = f.feature_scale();
    plan.radial_breaks = {s / 8.0, s / 2.0, s, 4.0 * s};
    if (f.center_hint()) {
        const double d = distance(*f.center_hint(), plan.center);
        if (d > 1e-14)
            for (double off : {-s, 0.0, s}) {
                const double b = d + off;
                if (b > 0.0) plan.radial_breaks.push_back(b);
            }
    }
    for (std::size_t i = 0; i < plan.secondary.size(); ++i) {
        const double d = distance(plan.secondary[i], plan.center);
        plan.radial_breaks.push_back(d - plan.bump_radii[i]);
        plan.radial_breaks.push_back(d);
        plan.radial_breaks.push_back(d + plan.bump_radii[i]);
    }
    return plan;
}

}  // namespace detail

/// Core spatial integrator: integrates h(y, r) over R^n (auto truncation from
/// meta's decay hint, analytic tail added) or over the ball of
/// cfg.truncation_radius. `meta` supplies the singularity list, decay hint,
/// center hint and feature scale; the first listed singularity is the main
/// polar center and r is the exact distance from it (kernels singular there
/// should use r, not recompute a distance). Further singular points are
/// extracted with smooth radial bumps and integrated about themselves.
inline QuadResult integrate_space_impl(const ScalarField& meta, const QuadratureConfig& cfg,
                                       const std::function<double(const Point&, double)>& h,
                                       const Point* kernel_center = nullptr,
                                       const Point* forced_center = nullptr,
                                       const Point* field_axis = nullptr) {
    cfg.validate();
    const int n = meta.dim();
    const auto plan = detail::plan_space(meta, forced_center);
    QuadResult out;
    long long evals = 0;

    // the axial fast path requires every special point to sit on the axis line
    std::optional<Point> axis;
    if (field_axis && !plan.radial_shortcut) {
        auto on_line = [&](const Point& s) {
            const Point v = s - plan.center;
            const Point perp = v - dot(v, *field_axis) * (*field_axis);
            return perp.norm() <= 1e-12 * (1.0 + v.norm());
        };
        bool ok = true;
        for (const auto& s : plan.secondary) ok = ok && on_line(s);
        if (kernel_center) ok = ok && on_line(*kernel_center);
        if (ok) axis = *field_axis;
    }

    const bool main_exact =
        kernel_center == nullptr || distance(plan.center, *kernel_center) < 1e-14;
    auto masked = [&](const Point& y, double r) -> double {
        double m = 1.0;
        for (std::size_t i = 0; i < plan.secondary.size(); ++i)
            m -= detail::radial_bump(distance(y, plan.secondary[i]), plan.bump_radii[i]);
        if (m == 0.0) return 0.0;
        const double rk = main_exact ? r : distance(*kernel_center, y);
        return m * h(y, rk);
    };

    const bool bounded = cfg.truncation_radius > 0.0;
    double Rt = cfg.truncation_radius;
    double tail_corr = 0.0, tail_err = 0.0;
    if (!bounded) {
        const DecayHint& d = meta.decay();
        if (!(d.exponent > n))
            throw std::invalid_argument(
                "integrate_space: decay exponent <= dimension on an infinite domain");
        // coarse magnitude estimate, then the rel_tol/10 truncation rule
        double max_secondary = 0.0;
        for (const auto& s : plan.secondary)
            max_secondary = std::max(max_secondary, distance(s, plan.center));
        const double R1 =
            std::max({2.0 * d.valid_radius + 2.0 * plan.center.norm(), 8.0 * meta.feature_scale(),
                      2.0 * max_secondary, 1.0});
        detail::PolarSpec coarse_spec{plan.center, plan.radial_shortcut, plan.radial_breaks, axis};
        QuadratureConfig coarse_cfg = cfg;
        coarse_cfg.max_subdivisions = 400;
        auto coarse = detail::polar_shell_integral(masked, coarse_spec, n, 0.0, R1, coarse_cfg,
                                                   1e-3, cfg.abs_tol, evals);
        const double a = d.exponent, c = d.coefficient;
        const double target = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(coarse.value)) / 10.0;
        Rt = R1;
        if (c > 0.0) {
            const double bound_const = c * unit_sphere_area(n) / (a - n);
            Rt = std::pow(bound_const / target, 1.0 / (a - n));
            Rt = std::min(std::max({Rt, R1, 2.0 * d.valid_radius}), 1e300);
            tail_corr = bound_const * std::pow(Rt, n - a);
            tail_err = tail_corr;
        }
    }

    detail::PolarSpec spec{plan.center, plan.radial_shortcut, plan.radial_breaks, axis};
    auto main_q =
        detail::polar_shell_integral(masked, spec, n, 0.0, Rt, cfg, cfg.rel_tol, cfg.abs_tol, evals);

    double value = main_q.value, error = main_q.error;
    bool converged = main_q.converged;

    for (std::size_t i = 0; i < plan.secondary.size(); ++i) {
        const Point& s = plan.secondary[i];
        const double rho = plan.bump_radii[i];
        const bool local_exact = kernel_center && distance(s, *kernel_center) < 1e-14;
        auto local = [&](const Point& y, double r_local) -> double {
            const double m = detail::radial_bump(r_local, rho);
            if (m == 0.0) return 0.0;
            double rk = r_local;
            if (!local_exact)
                rk = kernel_center ? distance(*kernel_center, y) : distance(plan.center, y);
            return m * h(y, rk);
        };
        detail::PolarSpec lspec{s, false, {rho / 16.0, rho / 4.0, rho / 2.0}, axis};
        auto q = detail::polar_shell_integral(local, lspec, n, 0.0, rho, cfg, cfg.rel_tol,
                                              cfg.abs_tol / (1.0 + plan.secondary.size()), evals);
        value += q.value;
        error += q.error;
        converged = converged && q.converged;
    }

    out.value = value + tail_corr;
    out.tail_correction = tail_corr;
    out.error_estimate = error + tail_err;
    out.evaluations = evals;
    out.converged = converged;
    if (!converged) out.message = "integrate_space: subdivision budget exhausted";
    return out;
}

/// Integral of f over R^n or over the ball of cfg.truncation_radius.
inline QuadResult integrate_space(const ScalarField& f, const QuadratureConfig& cfg) {
    return integrate_space_impl(f, cfg, [&f](const Point& y, double) { return f(y); });
}

/// Principal value of int kernel(x, y) dy over R^n, kernel singular only at
/// y = x. Integrates over the excluded-ball complements for each epsilon in
/// cfg.pv_epsilons and Richardson-extrapolates assuming a leading O(eps)
/// error; the reported error reflects the extrapolation spread.
///
/// Tail handling assumes the kernel behaves like (f(x) - f(y))/|x - y|^(n+1)
/// far out (the only PV kernel family in this toolkit): the f(x) part of the
/// tail is added in closed form and the f(y) part from the decay hint.
inline QuadResult integrate_pv(const std::function<double(const Point&, const Point&)>& kernel,
                               const ScalarField& f, const Point& x, const QuadratureConfig& cfg) {
    cfg.validate();
    const int n = f.dim();
    if (x.dim() != n) throw std::invalid_argument("integrate_pv: point dimension mismatch");
    for (const auto& s : f.singularities())
        if (distance(s, x) < 1e-14)
            throw std::invalid_argument("integrate_pv: x is a singularity of f");

    long long evals = 0;
    auto h = [&kernel, &x](const Point& y, double) { return kernel(x, y); };

    std::vector<double> breaks;
    std::optional<Point> axis;
    bool radial_about_x = false;
    if (f.center_hint()) {
        const double d = distance(*f.center_hint(), x);
        if (d > 1e-14) {
            breaks.push_back(d);
            if (f.radial()) axis = (1.0 / d) * (*f.center_hint() - x);
        } else if (f.radial()) {
            radial_about_x = true;
        }
    }
    breaks.push_back(f.feature_scale());
    breaks.push_back(4.0 * f.feature_scale());
    detail::PolarSpec spec{x, radial_about_x, breaks, axis};

    const DecayHint& dh = f.decay();
    const double a = dh.exponent, c = dh.coefficient;
    const double S = unit_sphere_area(n);
    const double R1 = std::max({2.0 * x.norm() + 2.0 * dh.valid_radius, 8.0 * f.feature_scale(), 1.0});

    const auto& eps = cfg.pv_epsilons;
    const double eps0 = eps.front();

    auto base = detail::polar_shell_integral(h, spec, n, eps0, R1, cfg, cfg.rel_tol,
                                             0.25 * cfg.abs_tol, evals);

    const double fx = f(x);
    const double v0 = std::abs(base.value) + std::abs(fx) * S / R1;
    const double target = std::max(cfg.abs_tol, cfg.rel_tol * v0) / 10.0;
    double Rt = R1;
    if (a > 0.0 && c > 0.0) {
        const double amp = c * S * std::pow(2.0, a) / (1.0 + a);
        Rt = std::min(std::max(std::pow(amp / target, 1.0 / (1.0 + a)), R1), 1e300);
    }
    detail::Quad1D ext{};
    if (Rt > R1)
        ext = detail::polar_shell_integral(h, spec, n, R1, Rt, cfg, cfg.rel_tol, 0.25 * cfg.abs_tol,
                                           evals);

    // exact far-field contribution of the f(x)/|x-y|^(n+1) part
    const double tail_fx = fx * S / Rt;
    const double tail_fy = (a >= 0.0 && c > 0.0) ? c * S * std::pow(Rt, -(1.0 + a)) / (1.0 + a) : 0.0;
    const double tail_corr = tail_fx - tail_fy;
    const double tail_err = tail_fy * (1.0 + std::pow(2.0, a)) + std::abs(tail_fx) * 1e-12;

    // excluded-annulus increments between successive epsilons
    std::vector<double> values;
    values.reserve(eps.size());
    double acc = base.value + ext.value + tail_corr;
    double quad_err = base.error + ext.error;
    values.push_back(acc);
    bool converged = base.converged && ext.converged;
    for (std::size_t k = 1; k < eps.size(); ++k) {
        auto inc = detail::polar_shell_integral(h, spec, n, eps[k], eps[k - 1], cfg, cfg.rel_tol,
                                                0.25 * cfg.abs_tol / eps.size(), evals);
        acc += inc.value;
        quad_err += inc.error;
        converged = converged && inc.converged;
        values.push_back(acc);
    }

    // Richardson limit of the excluded-ball values (leading error O(eps))
    const auto rich = detail::richardson_limit(values, eps);

    QuadResult out;
    out.evaluations = evals;
    out.tail_correction = tail_corr;
    out.value = rich.value;
    out.error_estimate = rich.spread + quad_err + tail_err;
    // a converging schedule contracts the raw increments by orders of
    // magnitude; a spread comparable to the last increment means divergence
    const double scale = std::max(1.0, std::abs(out.value));
    const double last_increment = std::abs(values.back() - values[values.size() - 2]);
    if (rich.spread > 200.0 * std::max(cfg.abs_tol, cfg.rel_tol * scale) &&
        rich.spread > 0.1 * last_increment) {
        out.converged = false;
        out.message = "integrate_pv: extrapolation sequence not converging";
    }
    out.converged = out.converged && converged;
    if (!converged && out.message.empty())
        out.message = "integrate_pv: subdivision budget exhausted";
    return out;
}

}  // namespace kelvin
