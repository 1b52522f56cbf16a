#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "rtgrowth/config.hpp"
#include "rtgrowth/dispersion.hpp"
#include "rtgrowth/errors.hpp"

using namespace rtg;

TEST_CASE("growth rate at half the critical frequency") {
    auto p = oracle::default_profile();
    const double xi = 0.5 * p.xi_c();
    GrowthOutcome o = growth_rate(p, Mesh::uniform(1, 1, 256, 256), xi);
    REQUIRE(is_unstable(o));
    const ModeSolution& m = mode_of(o);
    CHECK(m.lambda > 0.0);
    CHECK(m.lambda * m.lambda <= p.geometry().g * xi + 1e-8);
    CHECK(m.diag.fixed_point_residual <= 1e-9);
    CHECK(m.diag.psi0 > 1e-6);
    CHECK(std::abs(m.s_star - m.lambda) <= 1e-9);
    CHECK(m.lambda * m.lambda <= 0.5 * (p.jump() - 0.1 * xi * xi) * m.diag.psi0 * m.diag.psi0 + 1e-8);
    // two resolutions agree
    GrowthOutcome o2 = growth_rate(p, Mesh::uniform(1, 1, 128, 128), xi);
    CHECK(mode_of(o2).lambda == doctest::Approx(m.lambda).epsilon(1e-6));
    // dense pencil plus plain bisection on a coarse mesh
    Mesh coarse = Mesh::uniform(1, 1, 24, 24);
    double ref = oracle::growth_rate(assemble(p, coarse, xi));
    CHECK(mode_of(growth_rate(p, coarse, xi)).lambda == doctest::Approx(ref).epsilon(1e-8));
    CHECK(ref == doctest::Approx(m.lambda).epsilon(1e-4));
}

TEST_CASE("stable above the critical frequency") {
    auto p = oracle::default_profile();
    GrowthOutcome o = growth_rate(p, Mesh::uniform(1, 1, 64, 64), 1.5 * p.xi_c());
    CHECK_FALSE(is_unstable(o));
    CHECK_THROWS_AS(growth_rate(p, Mesh::uniform(1, 1, 8, 8), 0.0), DomainError);
}

TEST_CASE("no surface tension: unstable at every frequency with a decaying tail") {
    auto cfg = RunConfig::defaults();
    cfg.set("geometry.sigma", "0");
    auto p = cfg.profile();
    Mesh m = Mesh::uniform(1, 1, 256, 256);
    double l[3];
    int i = 0;
    for (double xi : {0.5, 5.0, 50.0}) {
        GrowthOutcome o = growth_rate(p, m, xi);
        REQUIRE(is_unstable(o));
        l[i++] = mode_of(o).lambda;
    }
    CHECK(l[0] > 0.0);
    CHECK(l[2] < l[1]);
}

TEST_CASE("mode residuals decrease under refinement") {
    auto p = oracle::default_profile();
    std::vector<ModeDiagnostics> d;
    for (int n : {64, 128, 256})
        d.push_back(mode_of(growth_rate(p, Mesh::uniform(1, 1, n, n), 0.4 * p.xi_c())).diag);
    CHECK(std::log2(d[0].ode_residual / d[1].ode_residual) > 1.5);
    CHECK(std::log2(d[1].ode_residual / d[2].ode_residual) > 1.5);
    CHECK(std::log2(d[1].jump_normal / d[2].jump_normal) > 1.5);
    CHECK(std::log2(d[1].jump_tangential / d[2].jump_tangential) > 1.5);
    CHECK(d[2].jump_phi == 0.0);
    CHECK(d[2].jump_psi == 0.0);
}

TEST_CASE("sweep shape") {
    auto p = oracle::default_profile();
    Mesh m = Mesh::uniform(1, 1, 128, 128);
    DispersionCurve one = sweep(p, m, 1.0, 1.0, 1);
    REQUIRE(one.samples.size() == 1);
    CHECK(one.Lambda == doctest::Approx(one.samples[0].lambda()));
    DispersionCurve c = sweep(p, m, 0.02 * p.xi_c(), 0.98 * p.xi_c(), 16, {}, 2);
    for (std::size_t i = 0; i + 1 < c.samples.size(); ++i) CHECK(c.samples[i].xi < c.samples[i + 1].xi);
    for (const auto& s : c.samples) CHECK(c.Lambda >= s.lambda());
    CHECK(c.samples.front().lambda() < c.Lambda / 3);
    CHECK(c.samples.back().lambda() < c.Lambda / 3);
    CHECK(c.argmax > c.samples.front().xi);
    CHECK(c.argmax < c.samples.back().xi);
    CHECK_THROWS_AS(sweep(p, m, 1.0, 0.5, 4), ConfigError);
}

TEST_CASE("lattice enumeration") {
    auto p = oracle::default_profile();
    Mesh m = Mesh::uniform(1, 1, 64, 64);
    DispersionCurve c = lattice_modes(p, m, 1.0);
    std::vector<double> mags;
    for (const auto& s : c.samples) mags.push_back(s.xi);
    std::vector<double> expect = {1, std::sqrt(2.0), 2, std::sqrt(5.0), std::sqrt(8.0), 3};
    REQUIRE(mags.size() == expect.size());
    for (std::size_t i = 0; i < mags.size(); ++i) CHECK(mags[i] == doctest::Approx(expect[i]));
    CHECK(c.points.size() == 4 + 4 + 4 + 8 + 4 + 4);
    CHECK(c.Lambda_L > 0.0);
    CHECK_FALSE(c.certificate);
    DispersionCurve cert = lattice_modes(p, m, std::sqrt(0.1));
    CHECK(cert.certificate);
    CHECK(cert.points.empty());
    auto cfg = RunConfig::defaults();
    cfg.set("geometry.sigma", "0");
    CHECK_THROWS_AS(lattice_modes(cfg.profile(), m, 1.0), ConfigError);
}
