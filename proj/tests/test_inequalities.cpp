#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "kelvin/bubbles.hpp"
#include "kelvin/fractional_laplacian.hpp"
#include "kelvin/inequalities.hpp"

using namespace kelvin;

TEST_CASE("elementary exp-log gap") {
    SECTION("a = 0 reduces to b ln(b+1)") {
        for (double b : {0.0, 0.5, 3.0, 40.0})
            CHECK(explogl_gap(0.0, b) == Catch::Approx(b * std::log1p(b)).margin(1e-14));
    }
    SECTION("b = 0 reduces to e^a - a - 1") {
        for (double a : {0.0, 0.5, 3.0})
            CHECK(explogl_gap(a, 0.0) == Catch::Approx(std::expm1(a) - a).margin(1e-14));
    }
    SECTION("a = 1, b = e - 1 gives e - 2") {
        CHECK(explogl_gap(1.0, M_E - 1.0) == Catch::Approx(M_E - 2.0).epsilon(1e-12));
        CHECK(explogl_gap(1.0, M_E - 1.0) == Catch::Approx(0.71828).epsilon(1e-4));
    }
    SECTION("negative inputs rejected") {
        CHECK_THROWS_AS(explogl_gap(-0.1, 1.0), std::invalid_argument);
        CHECK_THROWS_AS(explogl_gap_sharp(1.0, -0.1), std::invalid_argument);
    }
    SECTION("nonnegative on 1e5 seeded pairs in [0,50]^2, sharp form dominated") {
        std::mt19937_64 rng(42);
        std::uniform_real_distribution<double> u50(0.0, 50.0);
        double min_gap = 1e300, min_sharp = 1e300, max_excess = -1e300;
        for (int i = 0; i < 100000; ++i) {
            const double a = u50(rng), b = u50(rng);
            const double g = explogl_gap(a, b), gs = explogl_gap_sharp(a, b);
            min_gap = std::min(min_gap, g);
            min_sharp = std::min(min_sharp, gs);
            // (b+1) ln(b+1) - b <= b ln(b+1), so the sharp gap is the smaller
            // one; the slack is measured relative to the gap magnitude since
            // the values reach e^50
            max_excess = std::max(max_excess, (gs - g) / std::max(1.0, g));
        }
        CHECK(min_gap >= -1e-12);
        CHECK(min_sharp >= -1e-12);
        CHECK(max_excess <= 1e-12);
        // and the dominance identity itself: (b+1)ln(b+1) - b - b ln(b+1) = ln(b+1) - b <= 0
        for (double b : {0.0, 0.3, 2.0, 17.0, 50.0}) CHECK(std::log1p(b) - b <= 1e-12);
    }
}

TEST_CASE("Orlicz pairing contract") {
    QuadratureConfig cfg;
    cfg.rel_tol = 1e-8;
    cfg.abs_tol = 1e-12;
    SECTION("f = 0: product vanishes and is dominated") {
        ScalarField z = make_radial_field(2, [](double) { return 0.0; }, Point::zero(2),
                                          DecayHint(0.0, 0.0, 1.0));
        ScalarField g = make_radial_field(2, [](double r) { return r < 1.0 ? 2.0 : 0.0; },
                                          Point::zero(2), DecayHint(0.0, 2.0, 1.0));
        auto res = orlicz_pair(z, g, 2.0, cfg);
        CHECK(res.pair.expL_norm == 0.0);
        CHECK(res.product_integral == 0.0);
        CHECK(res.product_integral <= res.pair.LlnL_norm);
    }
    SECTION("unit-disk plateaus of height 1") {
        auto ind = [](double r) { return r < 1.0 ? 1.0 : 0.0; };
        ScalarField f = make_radial_field(2, ind, Point::zero(2), DecayHint(0.0, 1.0, 1.0));
        auto res = orlicz_pair(f, f, 1.5, cfg);
        CHECK(res.product_integral == Catch::Approx(M_PI).epsilon(1e-6));
        CHECK(res.pair.expL_norm == Catch::Approx((M_E - 2.0) * M_PI).epsilon(1e-6));
        CHECK(res.pair.LlnL_norm == Catch::Approx(M_PI * std::log(2.0)).epsilon(1e-6));
        CHECK(res.slack > 0.1);  // strict inequality with visible margin
    }
    SECTION("log spike against the bubble's u^4") {
        const Point x0(0.3, 0.0);
        ScalarField spike(
            2, [x0](const Point& x) { return std::max(0.0, std::log(1.0 / distance(x, x0))); },
            DecayHint(0.0, 40.0, 1.0), {x0});
        Bubble2DParams b(1.5, 1.0, Point(0.0, 0.0));
        auto res = orlicz_pair(spike, bubble2d_u4_field(b), 2.0, cfg);
        CHECK(res.converged);
        CHECK(res.slack > 0.0);
    }
    SECTION("contract on 100 seeded random radial plateau pairs") {
        std::mt19937_64 rng(42);
        std::uniform_real_distribution<double> uh(0.0, 2.5), ur(0.2, 1.0);
        double min_slack = 1e300;
        for (int i = 0; i < 100; ++i) {
            const double r1 = ur(rng), h1 = uh(rng), h1b = uh(rng);
            const double r2 = ur(rng), h2 = uh(rng), h2b = uh(rng);
            ScalarField f = make_radial_field(
                2, [r1, h1, h1b](double r) { return r < r1 ? h1 : h1b; }, Point::zero(2),
                DecayHint(0.0, std::max(h1, h1b), 1.0));
            ScalarField g = make_radial_field(
                2, [r2, h2, h2b](double r) { return r < r2 ? h2 : h2b; }, Point::zero(2),
                DecayHint(0.0, std::max(h2, h2b), 1.0));
            min_slack = std::min(min_slack, orlicz_pair(f, g, 1.5, cfg).slack);
        }
        CHECK(min_slack >= -1e-9);
    }
}

TEST_CASE("empirical HLS ratio") {
    QuadratureConfig cfg;
    cfg.rel_tol = 1e-5;
    cfg.abs_tol = 1e-9;
    SECTION("zero field reported with the 0/0 flag") {
        ScalarField z(2, [](const Point&) { return 0.0; }, DecayHint(5.0, 0.0, 1.0));
        auto r = hls_ratio(z, 2, 1.0, 1.2, 3.0, cfg);
        CHECK(r.zero_over_zero);
        CHECK(r.value == 0.0);
    }
    SECTION("Gaussian: finite, positive, exactly scale invariant") {
        ScalarField g = gaussian_field(2, Point::zero(2), 1.0);
        ScalarField g2(2, [g](const Point& x) { return 2.0 * g(x); },
                       DecayHint(8.0, 2.0 * g.decay().coefficient, g.decay().valid_radius));
        g2.set_center_hint(Point::zero(2), true);
        const auto r1 = hls_ratio(g, 2, 1.0, 1.2, 3.0, cfg);
        const auto r2 = hls_ratio(g2, 2, 1.0, 1.2, 3.0, cfg);
        CHECK(r1.value > 0.0);
        CHECK(std::abs(r1.value - r2.value) <= 1e-10 * r1.value);
    }
    SECTION("(1+|x|^2)^{-(n-gamma)} family agrees with the I(gamma) closed form") {
        // n = 2, gamma = 1/2: I_s f = I(1/2) (1+|x|^2)^{-1/2} exactly, s = 1
        const int n = 2;
        const double gamma = 0.5, s = 1.0, p = 1.2, q = 3.0;
        ScalarField f(
            n, [gamma](const Point& y) { return std::pow(1.0 + y.norm2(), gamma - 2.0); },
            DecayHint(2.0 * (2.0 - gamma), 1.0, 1.0));
        f.set_center_hint(Point::zero(n), true);
        const auto got = hls_ratio(f, n, s, p, q, cfg);

        QuadratureConfig rcfg;
        rcfg.rel_tol = 1e-9;
        const double I = riesz_identity_I(n, gamma);  // 2 pi
        CHECK(I == Catch::Approx(2.0 * M_PI).epsilon(1e-13));
        ScalarField numq(
            n, [I, gamma, q](const Point& x) { return std::pow(I * std::pow(1.0 + x.norm2(), -gamma), q); },
            DecayHint(2.0 * gamma * q, std::pow(I, q), 1.0));
        numq.set_center_hint(Point::zero(n), true);
        ScalarField denp(
            n, [gamma, p](const Point& y) { return std::pow(std::pow(1.0 + y.norm2(), gamma - 2.0), p); },
            DecayHint(2.0 * (2.0 - gamma) * p, 1.0, 1.0));
        denp.set_center_hint(Point::zero(n), true);
        const double ref = std::pow(integrate_space(numq, rcfg).value, 1.0 / q) /
                           std::pow(integrate_space(denp, rcfg).value, 1.0 / p);
        CHECK(got.value == Catch::Approx(ref).epsilon(1e-3));
    }
    SECTION("exponent relation and ranges enforced") {
        ScalarField g = gaussian_field(2, Point::zero(2), 1.0);
        CHECK_THROWS_AS(hls_ratio(g, 2, 1.0, 1.2, 2.9, QuadratureConfig{}), std::invalid_argument);
        CHECK_THROWS_AS(hls_ratio(g, 2, 1.0, 3.0, 1.2, QuadratureConfig{}), std::invalid_argument);
        CHECK_THROWS_AS(hls_ratio(g, 2, 2.5, 1.2, 3.0, QuadratureConfig{}), std::invalid_argument);
    }
}
