#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "kelvin/bubbles.hpp"
#include "kelvin/fractional_laplacian.hpp"
#include "kelvin/potentials.hpp"

using namespace kelvin;

namespace {
QuadratureConfig cfg7() {
    QuadratureConfig cfg;
    cfg.rel_tol = 1e-7;
    cfg.abs_tol = 1e-10;
    return cfg;
}
}  // namespace

TEST_CASE("normalization constant from the defining integral") {
    auto cfg = cfg7();
    SECTION("strictly positive and matches the Gamma form") {
        for (int n : {2, 3})
            for (double a : {0.4, 1.0, 1.6}) {
                const double q = cn_alpha(n, a, cfg);
                CHECK(q > 0.0);
                CHECK(q == Catch::Approx(cn_alpha_closed_form(n, a)).epsilon(1e-9));
            }
    }
    SECTION("alpha = 1 values implied by the Riesz kernels") {
        CHECK(cn_alpha(2, 1.0, cfg) == Catch::Approx(1.0 / (2.0 * M_PI)).epsilon(1e-10));
        CHECK(cn_alpha(3, 1.0, cfg) == Catch::Approx(1.0 / (M_PI * M_PI)).epsilon(1e-10));
    }
    SECTION("alpha range enforced") {
        CHECK_THROWS_AS(cn_alpha(2, 0.0, cfg), std::invalid_argument);
        CHECK_THROWS_AS(cn_alpha(2, 2.0, cfg), std::invalid_argument);
        CHECK_THROWS_AS(cn_alpha_closed_form(3, 2.5), std::invalid_argument);
    }
}

TEST_CASE("fraclap_pv on the model fields") {
    auto cfg = cfg7();
    const FracLapConvention c2 = make_convention(2, 1.0, cfg, false);
    const FracLapConvention c3 = make_convention(3, 1.0, cfg, false);

    SECTION("constants map to zero at every probe") {
        ScalarField one(2, [](const Point&) { return 4.2; }, DecayHint(0.0, 4.2, 1.0));
        for (double r : {0.0, 0.7, 2.3})
            CHECK(std::abs(fraclap_pv(one, Point(r, -r), c2, cfg)) <= cfg.abs_tol * 10 + 1e-12);
    }
    SECTION("planar bubble: half-Laplacian equals e^{pv}") {
        Bubble2DParams b(1.5, 1.0, Point(0.0, 0.0));
        ScalarField u = bubble2d_u_field(b);
        // e^{p v(0)} = ((6/p)^{1/6} mu)^{3/2} = 4^{1/4} = sqrt 2
        CHECK(fraclap_pv(u, Point(0.0, 0.0), c2, cfg) ==
              Catch::Approx(std::sqrt(2.0)).epsilon(1e-4));
        const double rhs = std::pow(std::pow(4.0, 1.0 / 6.0) / 2.0, 1.5);
        CHECK(fraclap_pv(u, Point(1.0, 0.0), c2, cfg) == Catch::Approx(rhs).epsilon(1e-4));
    }
    SECTION("3D Lorentzian: (-Delta)^{1/2}(1+|x|^2)^{-1} = 2(1+|x|^2)^{-2}") {
        ScalarField f(3, [](const Point& x) { return 1.0 / (1.0 + x.norm2()); },
                      DecayHint(2.0, 1.0, 1.0));
        f.set_center_hint(Point::zero(3), true);
        CHECK(fraclap_pv(f, Point(0.0, 0.0, 0.0), c3, cfg) == Catch::Approx(2.0).epsilon(1e-4));
        CHECK(fraclap_pv(f, Point(1.0, 0.0, 0.0), c3, cfg) == Catch::Approx(0.5).epsilon(1e-4));
    }
    SECTION("probe on a listed singularity is rejected") {
        ScalarField f(2, [](const Point& y) { return 1.0 / y.norm(); }, DecayHint(1.0, 1.0, 1.0),
                      {Point(0.0, 0.0)});
        CHECK_THROWS_AS(fraclap_pv(f, Point(0.0, 0.0), c2, cfg), std::invalid_argument);
    }
    SECTION("linearity over random Gaussian pairs") {
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> uc(-1.5, 1.5);
        ScalarField f = gaussian_field(2, Point::zero(2), 0.8);
        ScalarField g = gaussian_field(2, Point(0.4, -0.2), 1.3);
        const Point x(0.3, 0.3);
        const double pf = fraclap_pv(f, x, c2, cfg), pg = fraclap_pv(g, x, c2, cfg);
        for (int i = 0; i < 10; ++i) {
            const double a = uc(rng), b = uc(rng);
            const double combined = fraclap_pv(field_combine(a, f, b, g), x, c2, cfg);
            CHECK(combined == Catch::Approx(a * pf + b * pg).margin(2e-5));
        }
    }
}

TEST_CASE("extension route cross-validates the PV route") {
    auto cfg = cfg7();
    const FracLapConvention c2 = make_convention(2, 1.0, cfg, false);
    SECTION("constants map to zero") {
        ScalarField one(2, [](const Point&) { return 1.0; }, DecayHint(0.0, 1.0, 1.0));
        CHECK(std::abs(fraclap_extension_result(one, Point(0.2, 0.4), c2, cfg).value) <= 1e-9);
    }
    SECTION("bubble and Gaussian probes agree within 1e-3") {
        Bubble2DParams b(1.5, 1.0, Point(0.0, 0.0));
        ScalarField u = bubble2d_u_field(b);
        ScalarField g = gaussian_field(2, Point::zero(2), 1.0);
        for (double r : {0.0, 0.5, 1.0, 2.0}) {
            const Point x(r, 0.0);
            const double pu = fraclap_pv(u, x, c2, cfg);
            const double eu = fraclap_extension(u, x, c2, cfg);
            CHECK(std::abs(pu - eu) <= 1e-3 * (1.0 + std::abs(eu)));
            const double pg = fraclap_pv(g, x, c2, cfg);
            const double eg = fraclap_extension(g, x, c2, cfg);
            CHECK(std::abs(pg - eg) <= 1e-3 * (1.0 + std::abs(eg)));
        }
    }
    SECTION("only alpha = 1 supported") {
        FracLapConvention bad{2, 1.5, cn_alpha_closed_form(2, 1.5), 1.0};
        ScalarField g = gaussian_field(2, Point::zero(2), 1.0);
        CHECK_THROWS_AS(fraclap_extension(g, Point(0.0, 0.0), bad, cfg7()), std::invalid_argument);
    }
}

TEST_CASE("round trip: Riesz potential inverts the PV half-Laplacian") {
    // nested quadrature: the inner operator runs at 1e-4 and the outer
    // convolution is truncated where the integrand has fallen below the
    // 1e-3 round-trip target
    QuadratureConfig inner;
    inner.rel_tol = 1e-4;
    inner.abs_tol = 1e-7;
    QuadratureConfig outer = inner;
    outer.truncation_radius = 60.0;
    SECTION("2D, kernel 1/(2 pi |x-y|)") {
        ScalarField g = gaussian_field(2, Point::zero(2), 1.0);
        const FracLapConvention conv = make_convention(2, 1.0, inner, false);
        ScalarField lap(
            2, [g, conv, inner](const Point& y) { return fraclap_pv(g, y, conv, inner); },
            DecayHint(3.0, 2.0, 6.0));
        lap.set_center_hint(Point::zero(2), true);
        for (double r : {0.0, 0.7, 1.4}) {
            const Point x(r, 0.0);
            const double back = riesz2d(lap, x, outer).value;
            CHECK(std::abs(back - g(x)) <= 1e-3 * (1.0 + std::abs(g(x))));
        }
    }
    SECTION("3D, kernel 1/(2 pi^2 |x-y|^2)") {
        ScalarField g = gaussian_field(3, Point::zero(3), 1.0);
        const FracLapConvention conv = make_convention(3, 1.0, inner, false);
        ScalarField lap(
            3, [g, conv, inner](const Point& y) { return fraclap_pv(g, y, conv, inner); },
            DecayHint(4.0, 3.0, 6.0));
        lap.set_center_hint(Point::zero(3), true);
        for (double r : {0.0, 0.8}) {
            const Point x(r, 0.0, 0.0);
            const double back = riesz3d_inv_halflap(lap, x, outer).value;
            CHECK(std::abs(back - g(x)) <= 1e-3 * (1.0 + std::abs(g(x))));
        }
    }
}

TEST_CASE("finite-difference Laplacian") {
    SECTION("|x|^2 in the plane has -Delta = -4") {
        ScalarField f(2, [](const Point& x) { return x.norm2(); }, DecayHint(-2.0, 100.0, 1.0));
        CHECK(laplacian_fd(f, Point(0.3, -0.2), 0.01) == Catch::Approx(-4.0).epsilon(1e-10));
    }
    SECTION("bubble v reproduces u^4") {
        Bubble2DParams b(1.5, 1.0, Point(0.0, 0.0));
        ScalarField v = bubble2d_v_field(b);
        // u^4(e1) = (6/p) mu^2/(1+mu^2)^2 = 4 * (1/2)^2 = 1
        const Point x(1.0, 0.0);
        CHECK(laplacian_fd(v, x, laplacian_fd_default_step(v, x)) ==
              Catch::Approx(1.0).epsilon(1e-7));
    }
    SECTION("Aubin-Talenti profile: -Delta U = 3 U^5") {
        // oracle by hand differentiation: U = (1+r^2)^{-1/2} gives
        // Delta U = -3 (1+r^2)^{-5/2} in R^3
        ScalarField u(3, [](const Point& x) { return 1.0 / std::sqrt(1.0 + x.norm2()); },
                      DecayHint(1.0, 1.0, 1.0));
        u.set_center_hint(Point::zero(3), true);
        CHECK(laplacian_fd(u, Point(0.0, 0.0, 0.0), 0.01) == Catch::Approx(3.0).epsilon(1e-6));
    }
    SECTION("stencil near a singularity is rejected") {
        ScalarField f(2, [](const Point& y) { return 1.0 / y.norm(); }, DecayHint(1.0, 1.0, 1.0),
                      {Point(0.0, 0.0)});
        CHECK_THROWS_AS(laplacian_fd(f, Point(0.01, 0.0), 0.01), std::domain_error);
        CHECK_THROWS_AS(laplacian_fd(f, Point(1.0, 0.0), -0.1), std::invalid_argument);
    }
}

TEST_CASE("extension constant calibration lands on the Poisson value") {
    QuadratureConfig cfg;
    cfg.rel_tol = 1e-6;
    cfg.abs_tol = 1e-9;
    const FracLapConvention c2 = make_convention(2, 1.0, cfg, true);
    CHECK(c2.extension_constant == Catch::Approx(1.0 / (2.0 * M_PI)).epsilon(5e-3));
    const FracLapConvention c3 = make_convention(3, 1.0, cfg, true);
    CHECK(c3.extension_constant == Catch::Approx(1.0 / (M_PI * M_PI)).epsilon(5e-3));
    SECTION("self-consistency of the convention object") {
        CHECK(c2.c_n_alpha > 0.0);
        CHECK(c2.extension_constant > 0.0);
        CHECK_NOTHROW(c2.validate());
    }
}
