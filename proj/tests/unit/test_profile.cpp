#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "rtgrowth/errors.hpp"
#include "rtgrowth/profile.hpp"

using namespace rtg;

namespace {
SlabGeometry geo(double sigma = 0.1, double ell = 1.0) {
    SlabGeometry g;
    g.sigma = sigma;
    g.ell = ell;
    return g;
}
}  // namespace

TEST_CASE("isothermal profile closed form") {
    auto p = build_profile(PressureLaw::polytropic(2, 1), PressureLaw::polytropic(1, 1), 1.0, geo(),
                           ViscosityLaw::constant(0.1), ViscosityLaw::constant(0.1));
    CHECK(p.rho_plus() == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(p.jump() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(p.xi_c() == doctest::Approx(std::sqrt(10.0)).epsilon(1e-14));
    for (double x : {-1.0, -0.6, -0.1}) CHECK(p.rho0(x) == doctest::Approx(std::exp(-x / 2)).epsilon(1e-12));
    for (double x : {0.1, 0.5, 1.0}) CHECK(p.rho0(x) == doctest::Approx(2 * std::exp(-x)).epsilon(1e-12));
    double prev = INFINITY;
    for (int i = 0; i <= 100; ++i) {
        double x = -1.0 + i / 50.0;
        Side s = x < 0 ? Side::lower : Side::upper;
        if (i == 50) continue;
        double r = p.rho0(s, x);
        if (s == Side::lower || i > 51) CHECK(r < prev);
        prev = r;
    }
}

TEST_CASE("sigma = 0 has no critical frequency") {
    auto p = build_profile(PressureLaw::polytropic(2, 1), PressureLaw::polytropic(1, 1), 1.0, geo(0.0),
                           ViscosityLaw::constant(0.1), ViscosityLaw::constant(0.1));
    CHECK(std::isinf(p.xi_c()));
}

TEST_CASE("vacuum on the upper side") {
    // rho0+ = 1 with gamma+ = 2, K+ = 1: vacuum height K gamma / (g (gamma - 1)) = 2
    auto lower = PressureLaw::polytropic(2, 1), upper = PressureLaw::polytropic(1, 2);
    auto ok = build_profile(lower, upper, 0.5, geo(0.1, 1.0), ViscosityLaw::constant(0.1),
                            ViscosityLaw::constant(0.1));
    CHECK(ok.rho_plus() == doctest::Approx(1.0).epsilon(1e-14));
    try {
        build_profile(lower, upper, 0.5, geo(0.1, 3.0), ViscosityLaw::constant(0.1),
                      ViscosityLaw::constant(0.1));
        FAIL("expected a vacuum error");
    } catch (const VacuumError& e) {
        CHECK(e.side() == "upper");
    }
}

TEST_CASE("inadmissible and invalid configurations") {
    auto v = ViscosityLaw::constant(0.1);
    CHECK_THROWS_AS(build_profile(PressureLaw::polytropic(1, 1), PressureLaw::polytropic(2, 1), 1.0,
                                  geo(), v, v),
                    ConfigError);
    SlabGeometry g = geo();
    g.g = 0.0;
    CHECK_THROWS_AS(g.validate(), ConfigError);
    g = geo(-0.1);
    CHECK_THROWS_WITH_AS(g.validate(), doctest::Contains("geometry.sigma"), ConfigError);
    CHECK_THROWS_AS(ViscosityLaw::constant(0.0).validate(), ConfigError);
}

TEST_CASE("hydrostatic residual is small and second order") {
    auto p = oracle::default_profile();
    double r1 = verify_hydrostatic(p, 50, 1e-4), r2 = verify_hydrostatic(p, 50, 5e-5);
    CHECK(r1 <= 1e-6);
    CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(0.2));
    auto q = build_profile(PressureLaw::polytropic(1, 2), PressureLaw::polytropic(0.5, 1.4), 1.5,
                           geo(0.05), ViscosityLaw{0.1, 0.5, 0.02, 1.0}, ViscosityLaw::constant(0.2));
    double s1 = verify_hydrostatic(q, 40, 2e-3), s2 = verify_hydrostatic(q, 40, 1e-3);
    CHECK(s1 / s2 == doctest::Approx(4.0).epsilon(0.2));
}

TEST_CASE("pressure continuity and xi_c ordering") {
    auto lower = PressureLaw::polytropic(1, 2), upper = PressureLaw::polytropic(0.5, 1.4);
    double prev = INFINITY;
    for (double sigma : {0.05, 0.1, 0.2, 0.4}) {
        auto p = build_profile(lower, upper, 1.5, geo(sigma), ViscosityLaw::constant(0.1),
                               ViscosityLaw::constant(0.1));
        CHECK(std::abs(upper.pressure(p.rho_plus()) - lower.pressure(p.rho_minus())) <=
              1e-10 * lower.pressure(p.rho_minus()));
        CHECK(p.jump() > 0.0);
        CHECK(p.xi_c() < prev);
        prev = p.xi_c();
    }
    // larger jump, larger xi_c
    auto a = build_profile(PressureLaw::polytropic(2, 1), PressureLaw::polytropic(1, 1), 1.0, geo(),
                           ViscosityLaw::constant(0.1), ViscosityLaw::constant(0.1));
    auto b = build_profile(PressureLaw::polytropic(3, 1), PressureLaw::polytropic(1, 1), 1.0, geo(),
                           ViscosityLaw::constant(0.1), ViscosityLaw::constant(0.1));
    CHECK(b.jump() > a.jump());
    CHECK(b.xi_c() > a.xi_c());
}

TEST_CASE("coefficient derivatives match finite differences") {
    auto p = build_profile(PressureLaw::polytropic(1, 2), PressureLaw::polytropic(0.5, 1.4), 1.5,
                           geo(0.05), ViscosityLaw{0.1, 0.5, 0.02, 1.0}, ViscosityLaw::constant(0.2));
    const double h = 1e-5;
    for (double x : {-0.7, -0.2, 0.3, 0.8}) {
        Side s = x < 0 ? Side::lower : Side::upper;
        auto c = p.at(s, x), a = p.at(s, x - h), b = p.at(s, x + h);
        CHECK(c.drho0 == doctest::Approx((b.rho0 - a.rho0) / (2 * h)).epsilon(1e-7));
        CHECK(c.dprho == doctest::Approx((b.prho - a.prho) / (2 * h)).epsilon(1e-7));
        CHECK(c.deps0 == doctest::Approx((b.eps0 - a.eps0) / (2 * h)).epsilon(1e-6));
        CHECK(c.ddelta0 == doctest::Approx((b.delta0 - a.delta0) / (2 * h)).epsilon(1e-6));
    }
}
