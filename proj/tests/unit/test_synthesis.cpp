#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "rtgrowth/errors.hpp"
#include "rtgrowth/synthesis.hpp"

using namespace rtg;

namespace {

const SteadyProfile& profile() {
    static const SteadyProfile p = oracle::default_profile();
    return p;
}

const Mesh& mesh() {
    static const Mesh m = Mesh::uniform(1, 1, 64, 64);
    return m;
}

const NonperiodicField& annulus() {
    static const NonperiodicField f(profile(), mesh(), default_bump(profile()));
    return f;
}

const PeriodicField& periodic() {
    static const DispersionCurve c = lattice_modes(profile(), mesh(), 1.0);
    static const PeriodicField f(profile(), c);
    return f;
}

}  // namespace

TEST_CASE("extend_to_plane rotates the reduced mode") {
    const double xi = 0.5 * profile().xi_c();
    ModeSolution m = mode_of(growth_rate(profile(), mesh(), xi));
    NormalMode3D a = extend_to_plane(m, {xi, 0.0});
    CHECK(a.cos_a == 1.0);
    CHECK(a.sin_a == 0.0);
    NormalMode3D b = extend_to_plane(m, {0.6 * xi, 0.8 * xi});
    CHECK(b.lambda == m.lambda);
    auto pa = a.profile(-0.3, Side::lower), pb = b.profile(-0.3, Side::lower);
    CHECK(pb[0] == doctest::Approx(0.6 * pa[0]));
    CHECK(pb[1] == doctest::Approx(0.8 * pa[0]));
    CHECK(pb[2] == pa[2]);
    CHECK_THROWS_AS(extend_to_plane(m, {xi, 0.1}), DomainError);
}

TEST_CASE("periodic mode: trace, growth and continuity") {
    const PeriodicField& f = periodic();
    const auto k = f.k();
    CHECK((k[0] > 0 || (k[0] == 0 && k[1] > 0)));
    const double psi0 = f.mode().x[f.mode().mesh.psi0_dof()];
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(0.0, 2.0 * std::numbers::pi * f.L());
    for (int i = 0; i < 10; ++i) {
        Point3 x{U(rng), U(rng), 0.0};
        FieldValue v = f.eval(x, 0.0);
        const double th = (k[0] * x.x1 + k[1] * x.x2) / f.L();
        CHECK(v.eta[2] == doctest::Approx(2.0 * psi0 * std::cos(th)).epsilon(1e-12));
        CHECK(v.imag <= 1e-12);
        FieldValue below = f.eval({x.x1, x.x2, -1e-13}, 0.0);
        for (int c = 0; c < 3; ++c) CHECK(below.eta[c] == doctest::Approx(v.eta[c]).epsilon(1e-9));
        Point3 y{x.x1, x.x2, 0.4};
        FieldValue a = f.eval(y, 0.0), b = f.eval(y, 2.0);
        const double g = std::exp(2.0 * f.rate());
        for (int c = 0; c < 3; ++c) {
            CHECK(b.eta[c] == doctest::Approx(g * a.eta[c]).epsilon(1e-12));
            CHECK(b.v[c] == doctest::Approx(f.rate() * b.eta[c]).epsilon(1e-12));
        }
        CHECK(b.q == doctest::Approx(g * a.q).epsilon(1e-12));
    }
    CHECK(f.sobolev_norm(Field::eta, 0, 1.0) ==
          doctest::Approx(std::exp(f.rate()) * f.sobolev_norm(Field::eta, 0, 0.0)));
}

TEST_CASE("periodic Parseval") {
    const PeriodicField& f = periodic();
    const int kmax = std::max(std::abs(f.k()[0]), std::abs(f.k()[1]));
    const int n = 4 * kmax + 4;
    for (Field w : {Field::eta, Field::v, Field::q}) {
        double direct = periodic_direct_l2(f, w, 0.5, n);
        CHECK(direct == doctest::Approx(f.sobolev_norm(w, 0, 0.5)).epsilon(1e-6));
    }
    CHECK_THROWS_AS(periodic_direct_l2(f, Field::eta, 0.0, 0), DomainError);
}

TEST_CASE("periodic synthesis needs an unstable lattice") {
    DispersionCurve cert = lattice_modes(profile(), mesh(), std::sqrt(0.1));
    CHECK_THROWS_AS(PeriodicField(profile(), cert), ConfigError);
    DispersionCurve plain = sweep(profile(), mesh(), 0.5, 1.0, 2);
    CHECK_THROWS_AS(PeriodicField(profile(), plain), ConfigError);
}

TEST_CASE("sobolev densities") {
    const ModeSolution& m = annulus().modes().front();
    for (Field w : {Field::eta, Field::v}) {
        double d0 = mode_sobolev_density(profile(), m, w, 0);
        double d1 = mode_sobolev_density(profile(), m, w, 1);
        double d2 = mode_sobolev_density(profile(), m, w, 2);
        CHECK(d0 > 0.0);
        CHECK(d0 <= d1);
        CHECK(d1 <= d2);
        CHECK_THROWS_AS(mode_sobolev_density(profile(), m, w, 3), DomainError);
    }
    CHECK(mode_sobolev_density(profile(), m, Field::q, 0) <=
          mode_sobolev_density(profile(), m, Field::q, 1));
    CHECK_THROWS_AS(mode_sobolev_density(profile(), m, Field::q, 2), DomainError);
    CHECK_THROWS_AS(mode_sobolev_density(profile(), m, Field::eta, -1), DomainError);
    CHECK(mode_sobolev_density(profile(), m, Field::v, 0) ==
          doctest::Approx(m.lambda * m.lambda * mode_sobolev_density(profile(), m, Field::eta, 0)));
    // zero data has zero norm
    BumpSpec zero = default_bump(profile());
    zero.amp = 0.0;
    NonperiodicField z(profile(), Mesh::uniform(1, 1, 16, 16), zero, {4, 8, {}, 1});
    CHECK(z.sobolev_norm(Field::eta, 2, 1.0) == 0.0);
    CHECK(z.eval({0.1, 0.2, 0.3}, 1.0).eta[2] == 0.0);
}

TEST_CASE("annulus synthesis") {
    const NonperiodicField& f = annulus();
    CHECK(f.lambda0() > 0.0);
    CHECK(f.lambda0() <= f.lambda_max());
    // trace at the origin: every plane wave adds psi(0) > 0
    CHECK(f.eval({0, 0, 0}, 0.0).eta[2] > 0.0);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(-2.0, 2.0), Z(-0.9, 0.9);
    for (int i = 0; i < 10; ++i) {
        Point3 x{U(rng), U(rng), Z(rng)};
        FieldValue a = f.eval(x, 1.0), b = f.eval_bessel(x, 1.0);
        const double scale = 1e-3 + std::abs(a.eta[2]);
        CHECK(a.imag <= 1e-10 * scale);
        for (int c = 0; c < 3; ++c) {
            CHECK(std::abs(a.eta[c] - b.eta[c]) <= 1e-10 * scale);
            CHECK(std::abs(a.v[c] - b.v[c]) <= 1e-10 * scale);
        }
        CHECK(std::abs(a.q - b.q) <= 1e-10 * (1e-3 + std::abs(a.q)));
        // rotating the point rotates the horizontal components
        const double c = std::cos(0.7), s = std::sin(0.7);
        FieldValue r = f.eval({c * x.x1 - s * x.x2, s * x.x1 + c * x.x2, x.x3}, 1.0);
        CHECK(std::abs(r.eta[0] - (c * a.eta[0] - s * a.eta[1])) <= 1e-10 * scale);
        CHECK(std::abs(r.eta[1] - (s * a.eta[0] + c * a.eta[1])) <= 1e-10 * scale);
        CHECK(std::abs(r.eta[2] - a.eta[2]) <= 1e-10 * scale);
    }
    for (double t : {1.0, 2.0})
        for (Field w : {Field::eta, Field::v, Field::q}) {
            double ratio = f.sobolev_norm(w, 0, t) / f.sobolev_norm(w, 0, 0.0);
            CHECK(ratio >= std::exp(t * f.lambda0()));
            CHECK(ratio <= std::exp(t * f.lambda_max()) * (1 + 1e-12));
        }
    CHECK(f.bump_weight(1) > f.bump_weight(0));
}

TEST_CASE("support and grid checks") {
    BumpSpec bad{0.5 * profile().xi_c(), 1.2 * profile().xi_c(), 1.0};
    CHECK_THROWS_AS(NonperiodicField(profile(), mesh(), bad), ConfigError);
    BumpSpec ok = default_bump(profile());
    CHECK_THROWS_AS(NonperiodicField(profile(), mesh(), ok, {4, 7, {}, 1}), ConfigError);
    CHECK(ok(ok.a) == 0.0);
    CHECK(ok(0.5 * (ok.a + ok.b)) == doctest::Approx(std::exp(-1.0)));
    Grid3 g{{0, 1}, {0, 2}, {-1, 1}, {2, 3, 1}};
    auto pts = g.points();
    REQUIRE(pts.size() == 6);
    CHECK(pts[5].x1 == 1.0);
    CHECK(pts[5].x2 == 2.0);
    CHECK(pts[5].x3 == -1.0);
    Grid3 e{{0, 1}, {0, 1}, {0, 1}, {0, 1, 1}};
    CHECK_THROWS_AS(e.points(), ConfigError);
}
