#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "kelvin/bubbles.hpp"
#include "kelvin/fractional_laplacian.hpp"
#include "kelvin/quadrature.hpp"

using namespace kelvin;

namespace {
QuadratureConfig tight() {
    QuadratureConfig cfg;
    cfg.rel_tol = 1e-9;
    cfg.abs_tol = 1e-12;
    return cfg;
}
}  // namespace

TEST_CASE("config invariants") {
    QuadratureConfig cfg;
    cfg.pv_epsilons = {0.1, 0.2};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.pv_epsilons = {0.1, -0.05};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.pv_epsilons = {0.1, 0.05};
    cfg.rel_tol = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("integrate_radial closed forms") {
    auto cfg = tight();
    SECTION("2 pi r mu^2/(1+mu^2 r^2)^2 over (0,inf) = pi") {
        // oracle: antiderivative -pi/(1+r^2), so the value is pi exactly
        auto g = [](double r) { return 2.0 * M_PI * r / std::pow(1.0 + r * r, 2.0); };
        auto q = integrate_radial(g, 0.0, INFINITY, cfg, DecayHint(3.0, 2.0 * M_PI, 1.0));
        CHECK(q.converged);
        CHECK(q.value == Catch::Approx(M_PI).epsilon(1e-9));
        CHECK(q.error_estimate >= std::abs(q.value - M_PI));
        // the mapped route (no decay hint) agrees
        auto q2 = integrate_radial(g, 0.0, INFINITY, cfg);
        CHECK(q2.value == Catch::Approx(M_PI).epsilon(1e-9));
    }
    SECTION("1/((1+b) sqrt b) over (0,inf) = pi") {
        // oracle: b = tan^2(theta) turns the integrand into 2 dtheta on (0, pi/2)
        auto q = integrate_radial([](double b) { return 1.0 / ((1.0 + b) * std::sqrt(b)); }, 0.0,
                                  INFINITY, cfg);
        CHECK(q.converged);
        CHECK(q.value == Catch::Approx(M_PI).epsilon(1e-9));
        CHECK(q.error_estimate >= std::abs(q.value - M_PI));
    }
    SECTION("empty interval is zero") {
        auto q = integrate_radial([](double) { return 7.0; }, 1.0, 1.0, tight());
        CHECK(q.value == 0.0);
        CHECK(q.evaluations == 0);
    }
    SECTION("non-truncatable tail is an explicit failure") {
        auto q = integrate_radial([](double r) { return 1.0 / (1.0 + r); }, 0.0, INFINITY, tight(),
                                  DecayHint(1.0, 1.0, 1.0));
        CHECK_FALSE(q.converged);
        CHECK(!q.message.empty());
    }
}

TEST_CASE("integrate_space closed forms") {
    auto cfg = tight();
    SECTION("2D Gaussian normalization") {
        ScalarField f(2, [](const Point& x) { return std::exp(-M_PI * x.norm2()); },
                      DecayHint(8.0, 1e-3, 2.0));
        f.set_center_hint(Point::zero(2), true);
        auto q = integrate_space(f, cfg);
        CHECK(q.value == Catch::Approx(1.0).epsilon(1e-8));
        CHECK(q.error_estimate >= std::abs(q.value - 1.0));
    }
    SECTION("bubble u^4 integrates to 6 pi/p") {
        for (double p : {1.0, 1.5, 3.0}) {
            Bubble2DParams b(p, 1.0, Point(0.0, 0.0));
            auto q = integrate_space(bubble2d_u4_field(b), cfg);
            CHECK(q.value == Catch::Approx(6.0 * M_PI / p).epsilon(1e-8));
            CHECK(q.error_estimate >= std::abs(q.value - 6.0 * M_PI / p));
        }
    }
    SECTION("3D singular closed form |y|^-2 (1+|y|^2)^-2 -> pi^2") {
        // oracle: the I(gamma) identity at x = 0, gamma = 1
        ScalarField f(3,
                      [](const Point& y) {
                          const double r2 = y.norm2();
                          return 1.0 / (r2 * std::pow(1.0 + r2, 2.0));
                      },
                      DecayHint(6.0, 1.0, 1.0), {Point(0.0, 0.0, 0.0)});
        f.set_center_hint(Point::zero(3), true);
        auto q = integrate_space(f, cfg);
        CHECK(q.value == Catch::Approx(M_PI * M_PI).epsilon(1e-8));
        CHECK(q.error_estimate >= std::abs(q.value - M_PI * M_PI));
    }
    SECTION("non-integrable hint rejected on the infinite domain") {
        ScalarField f(2, [](const Point& x) { return 1.0 / (1.0 + x.norm2()); },
                      DecayHint(2.0, 1.0, 1.0));
        CHECK_THROWS_AS(integrate_space(f, cfg), std::invalid_argument);
    }
}

TEST_CASE("linearity and translation invariance") {
    QuadratureConfig cfg;
    cfg.rel_tol = 1e-7;
    cfg.abs_tol = 1e-10;
    Bubble2DParams b(1.5, 1.0, Point(0.0, 0.0));
    ScalarField f = bubble2d_u4_field(b);
    ScalarField g = gaussian_field(2, Point::zero(2), 0.9);

    SECTION("20 random (a, b) combinations") {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> uc(-2.0, 2.0);
        const double If = integrate_space(f, cfg).value;
        const double Ig = integrate_space(g, cfg).value;
        for (int i = 0; i < 20; ++i) {
            const double a = uc(rng), c = uc(rng);
            auto q = integrate_space(field_combine(a, f, c, g), cfg);
            CHECK(q.value == Catch::Approx(a * If + c * Ig).margin(50.0 * q.error_estimate + 1e-9));
        }
    }
    SECTION("translate") {
        auto q0 = integrate_space(f, cfg);
        auto q1 = integrate_space(field_translate(f, Point(3.0, -2.0)), cfg);
        CHECK(q1.value == Catch::Approx(q0.value).epsilon(1e-6));
    }
}

TEST_CASE("principal-value integrals") {
    QuadratureConfig cfg;
    cfg.rel_tol = 1e-7;
    cfg.abs_tol = 1e-9;

    SECTION("constant field, difference kernel -> 0") {
        ScalarField c(2, [](const Point&) { return 3.0; }, DecayHint(0.0, 3.0, 1.0));
        auto kern = [&c](const Point& x, const Point& y) {
            return (c(x) - c(y)) / std::pow(distance(x, y), 3.0);
        };
        auto q = integrate_pv(kern, c, Point(0.3, 0.1), cfg);
        CHECK(q.converged);
        CHECK(std::abs(q.value) <= 1e-9);
    }
    SECTION("odd kernel cancels on every annulus") {
        ScalarField c(2, [](const Point&) { return 1.0; }, DecayHint(0.0, 1.0, 1.0));
        const Point x0(0.2, -0.5);
        auto kern = [](const Point& x, const Point& y) {
            return (y[0] - x[0]) / std::pow(distance(x, y), 3.0);
        };
        auto q = integrate_pv(kern, c, x0, cfg);
        CHECK(std::abs(q.value) <= 1e-9);
    }
    SECTION("Gaussian PV cross-checks the extension route") {
        ScalarField g = gaussian_field(2, Point::zero(2), 1.0);
        const FracLapConvention conv = make_convention(2, 1.0, cfg, /*calibrate=*/false);
        const Point x(0.0, 0.0);
        auto kern = [&g](const Point& xx, const Point& y) {
            return (g(xx) - g(y)) / std::pow(distance(xx, y), 3.0);
        };
        const double pv = conv.c_n_alpha * integrate_pv(kern, g, x, cfg).value;
        const double ext = fraclap_extension(g, x, conv, cfg);
        CHECK(pv == Catch::Approx(ext).epsilon(1e-3));
    }
    SECTION("non-Hoelder field: extrapolation flagged as non-convergent") {
        const Point x0(0.0, 0.0);
        ScalarField rough(2, [](const Point& y) { return std::pow(y.norm(), 0.1); },
                          DecayHint(-0.2, 2.0, 1.0));
        auto kern = [&rough](const Point& x, const Point& y) {
            return (rough(x) - rough(y)) / std::pow(distance(x, y), 3.0);
        };
        auto q = integrate_pv(kern, rough, x0, cfg);
        CHECK_FALSE(q.converged);
    }
    SECTION("probe at a singularity is rejected") {
        ScalarField f(2, [](const Point& y) { return 1.0 / y.norm(); }, DecayHint(1.0, 1.0, 1.0),
                      {Point(0.0, 0.0)});
        auto kern = [](const Point&, const Point&) { return 0.0; };
        CHECK_THROWS_AS(integrate_pv(kern, f, Point(0.0, 0.0), cfg), std::invalid_argument);
    }
}

TEST_CASE("determinism: identical configuration, identical bits") {
    QuadratureConfig cfg;
    cfg.rel_tol = 1e-8;
    Bubble2DParams b(1.5, 1.0, Point(0.0, 0.0));
    auto q1 = integrate_space(bubble2d_epv_field(b), cfg);
    auto q2 = integrate_space(bubble2d_epv_field(b), cfg);
    CHECK(q1.value == q2.value);
    CHECK(q1.error_estimate == q2.error_estimate);
    CHECK(q1.evaluations == q2.evaluations);
}
