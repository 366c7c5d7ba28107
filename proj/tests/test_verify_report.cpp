#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "kelvin/report_io.hpp"
#include "kelvin/verify.hpp"

using namespace kelvin;

TEST_CASE("planar PDE suite passes on spec'd parameter sets") {
    SECTION("p = 3/2, mu = 1, centered") {
        Bubble2DParams b(1.5, 1.0, Point(0.0, 0.0));
        auto rep = verify_pde_2d(b, default_probes(2, b.center, b.mu), suite_config(b.mu, 3e-5));
        CHECK(rep.passed);
        CHECK(rep.failures.empty());
        CHECK(rep.records.size() == 30);  // 15 probes x 2 equations
    }
    SECTION("p = 1, mu = 2, off-center") {
        Bubble2DParams b(1.0, 2.0, Point(1.0, -0.5));
        auto rep = verify_pde_2d(b, default_probes(2, b.center, b.mu), suite_config(b.mu, 3e-5));
        CHECK(rep.passed);
    }
}

TEST_CASE("impostor sensitivity: a 1% perturbation of u is caught") {
    Bubble2DParams b(1.5, 1.0, Point(0.0, 0.0));
    const auto cfg = suite_config(b.mu, 3e-5);
    const FracLapConvention conv = make_convention(2, 1.0, cfg, false);
    ScalarField u = bubble2d_u_field(b);
    ScalarField impostor(2, [u](const Point& x) { return 1.01 * u(x); },
                         DecayHint(1.0, 1.01 * u.decay().coefficient, u.decay().valid_radius));
    impostor.set_center_hint(*u.center_hint(), true);

    VerificationReport rep;
    rep.suite_id = "pde2d_impostor";
    rep.equation_tolerances = {{"half_laplacian_u_vs_exp_pv", 1e-3}};
    double worst = 0.0;
    for (const auto& x : {Point(0.0, 0.0), Point(1.0, 0.0), Point(3.0, 0.0)}) {
        const double lhs = fraclap_pv(impostor, x, conv, cfg);
        const double rhs = bubble2d_epv_field(b)(x);
        rep.records.push_back(make_record("half_laplacian_u_vs_exp_pv", x, lhs, rhs));
        worst = std::max(worst, rep.records.back().rel_err);
    }
    rep.passed = compute_passed(rep);
    CHECK(worst >= 5e-3);
    CHECK_FALSE(rep.passed);
}

TEST_CASE("IE suite details") {
    Bubble2DParams b(3.0, 1.0, Point(0.0, 0.0));
    auto rep = verify_ie_2d(b, ie_probes(2, b.center, b.mu), suite_config(b.mu, 1e-6));
    CHECK(rep.passed);
    SECTION("at the origin the log potential contributes exactly zero") {
        const auto gamma = bubble2d_invariants(b).gamma_const;
        bool seen = false;
        for (const auto& r : rep.records)
            if (r.equation_id == "logpot2d_u4_plus_gamma_vs_v" && r.probe.norm() == 0.0) {
                CHECK(r.lhs == gamma);
                seen = true;
            }
        CHECK(seen);
    }
}

TEST_CASE("3D suites handle the trivial pair and non-integer sigma") {
    SECTION("sigma = 1.3 passes in quadrature mode") {
        const auto b = Bubble3DParams::make(1.3, 1.0, Point(0.0, 0.0, 0.0));
        auto rep = verify_pde_3d(b, default_probes(3, b.center, b.mu), suite_config(b.mu, 1e-5));
        CHECK(rep.passed);
    }
    SECTION("identically zero fields solve the IE system trivially") {
        ScalarField z(3, [](const Point&) { return 0.0; }, DecayHint(5.0, 0.0, 1.0));
        QuadratureConfig cfg = suite_config(1.0, 1e-6);
        CHECK(riesz3d_inv_halflap(z, Point(1.0, 0.0, 0.0), cfg).value == 0.0);
        CHECK(newton3d(z, Point(1.0, 0.0, 0.0), cfg).value == 0.0);
        CHECK(hartree(z, 2.0, Point(1.0, 0.0, 0.0), cfg).value == 0.0);
    }
}

TEST_CASE("report passed flag is a pure function of records and tolerances") {
    VerificationReport rep;
    rep.suite_id = "synthetic";
    rep.equation_tolerances = {{"eq", 1e-3}};
    rep.records.push_back(make_record("eq", Point(0.0, 0.0), 1.0, 1.0 + 5e-4));
    rep.passed = compute_passed(rep);
    CHECK(rep.passed);
    rep.records.push_back(make_record("eq", Point(1.0, 0.0), 1.0, 1.01));
    CHECK_FALSE(compute_passed(rep));
    SECTION("record fields satisfy the defining identities") {
        const auto& r = rep.records.back();
        CHECK(r.abs_err == std::abs(r.lhs - r.rhs));
        CHECK(r.rel_err == r.abs_err / std::max(1.0, std::abs(r.rhs)));
    }
    SECTION("failures force failure") {
        VerificationReport bad;
        bad.failures.push_back("synthetic quadrature failure");
        CHECK_FALSE(compute_passed(bad));
    }
}

TEST_CASE("reports are deterministic byte for byte") {
    Bubble2DParams b2(1.5, 1.0, Point(0.0, 0.0));
    const auto b3 = Bubble3DParams::make(2.0, 1.0, Point(0.0, 0.0, 0.0));
    const auto cfg = suite_config(1.0, 1e-8);
    const std::string a = report_to_json(verify_identities(b2, b3, cfg));
    const std::string c = report_to_json(verify_identities(b2, b3, cfg));
    CHECK(a == c);
}

TEST_CASE("JSON round trip preserves every field") {
    Bubble2DParams b(1.5, 1.0, Point(0.0, 0.0));
    auto rep = verify_ie_2d(b, ie_probes(2, b.center, b.mu), suite_config(b.mu, 1e-6));
    rep.failures.push_back("note with \"quotes\" and\nnewline");
    rep.passed = compute_passed(rep);
    const std::string text = report_to_json(rep);
    const VerificationReport back = report_from_json(text);
    CHECK(report_to_json(back) == text);
    CHECK(back.records.size() == rep.records.size());
    for (std::size_t i = 0; i < rep.records.size(); ++i) {
        CHECK(back.records[i].lhs == rep.records[i].lhs);
        CHECK(back.records[i].rel_err == rep.records[i].rel_err);
    }
}

TEST_CASE("CSV format is frozen") {
    SECTION("header bytes") {
        CHECK(std::string(kCsvHeader) == "suite_id,equation_id,probe,lhs,rhs,abs_err,rel_err");
    }
    SECTION("empty record list yields header only") {
        VerificationReport rep;
        rep.suite_id = "empty";
        CHECK(report_to_csv(rep) == std::string(kCsvHeader) + "\n");
    }
    SECTION("one record yields exactly two lines with 17 significant digits") {
        VerificationReport rep;
        rep.suite_id = "s";
        rep.records.push_back(make_record("eq", Point(0.5, 0.0), 1.0 / 3.0, 0.25));
        const std::string csv = report_to_csv(rep);
        CHECK(csv ==
              "suite_id,equation_id,probe,lhs,rhs,abs_err,rel_err\n"
              "s,eq,0.5;0,0.33333333333333331,0.25,0.083333333333333315,0.083333333333333315\n");
    }
}
