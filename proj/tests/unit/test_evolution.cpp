#include <doctest.h>

#include <cmath>
#include <memory>

#include "oracles.hpp"
#include "rtgrowth/errors.hpp"
#include "rtgrowth/evolution.hpp"

using namespace rtg;

namespace {

std::shared_ptr<FormSet> forms_at(double frac, int n = 64) {
    auto p = oracle::default_profile();
    return std::make_shared<FormSet>(assemble(p, Mesh::uniform(1, 1, n, n), frac * p.xi_c()));
}

double total(const LedgerRow& r) { return r.kinetic + r.potential; }

}  // namespace

TEST_CASE("zero data stays zero") {
    auto f = forms_at(0.5, 16);
    Vec z(f->n(), 0.0);
    ModeTrajectory tr = integrate(f, z, z, 1e-2, 1.0);
    for (const auto& r : tr.ledger) {
        CHECK(r.kinetic == 0.0);
        CHECK(r.potential == 0.0);
        CHECK(r.dissipated_cum == 0.0);
        CHECK(r.norm1 == 0.0);
    }
    CHECK(energy_identity_check(tr) == 0.0);
}

TEST_CASE("energy does not increase at a stable frequency") {
    auto f = forms_at(1.5);
    Vec u0 = smooth_random_field(f->mesh, 3), v0 = smooth_random_field(f->mesh, 4);
    ModeTrajectory tr = integrate(f, u0, v0, 1e-2, 5.0);
    const double scale = total(tr.ledger[0]);
    for (std::size_t i = 1; i < tr.ledger.size(); ++i)
        CHECK(total(tr.ledger[i]) <= total(tr.ledger[i - 1]) + 1e-12 * scale);
    CHECK(total(tr.ledger.back()) < total(tr.ledger[0]));
    // exact discrete identity with midpoint dissipation
    for (const auto& r : tr.ledger)
        CHECK(std::abs(total(r) + r.dissipated_mid - scale) <= 1e-10 * scale);
}

TEST_CASE("growth bound examples") {
    auto p = oracle::default_profile();
    Mesh m = Mesh::uniform(1, 1, 128, 128);
    const double xi = 0.5 * p.xi_c();
    const double lam = mode_of(growth_rate(p, m, xi)).lambda;
    FormSet f = assemble(p, m, xi);
    GrowthBoundReport at = growth_bound_check(f, lam);
    CHECK(at.pass);
    CHECK(std::abs(at.min_eig) <= 1e-7);
    CHECK(growth_bound_check(f, 2 * lam).min_eig > 0.1);
    GrowthBoundReport half = growth_bound_check(f, 0.5 * lam);
    CHECK_FALSE(half.pass);
    CHECK(half.min_eig < 0.0);
    CHECK_THROWS_AS(growth_bound_check(f, -1.0), DomainError);
}

TEST_CASE("midpoint steps are reversible without viscosity") {
    auto f = forms_at(0.5, 32);
    SymBand zero(f->E1.n(), f->E1.kd());
    Vec u = smooth_random_field(f->mesh, 5), w = smooth_random_field(f->mesh, 6);
    const Vec u0 = u, w0 = w;
    MidpointStepper fwd(f->J, zero, f->E0, 1e-2), back(f->J, zero, f->E0, -1e-2);
    const int steps = 50;
    for (int i = 0; i < steps; ++i) fwd.step(u, w);
    for (int i = 0; i < steps; ++i) back.step(u, w);
    double err = 0.0, nrm = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        err = std::max({err, std::abs(u[i] - u0[i]), std::abs(w[i] - w0[i])});
        nrm = std::max({nrm, std::abs(u0[i]), std::abs(w0[i])});
    }
    CHECK(err <= 1e-10 * steps * nrm);
}

TEST_CASE("growing mode: rate, displacement and envelope") {
    auto p = oracle::default_profile();
    Mesh m = Mesh::uniform(1, 1, 128, 128);
    const double xi = 0.5 * p.xi_c();
    ModeSolution mode = mode_of(growth_rate(p, m, xi));
    auto f = std::make_shared<FormSet>(assemble(p, m, xi));
    Vec v0 = mode.x, a0 = mode.x;
    for (double& a : a0) a *= mode.lambda;
    IntegrateOptions opt;
    opt.eta0 = Vec(f->n(), 0.0);
    const double dt = default_dt(mode.lambda), T = 3.0 / mode.lambda;
    ModeTrajectory tr = integrate(f, v0, a0, dt, T, opt);
    const LedgerRow& last = tr.ledger.back();
    double rate = std::log(last.norm1 / tr.ledger[0].norm1) / last.t;
    CHECK(rate == doctest::Approx(mode.lambda).epsilon(1e-5));
    // eta = (e^{lambda t} - 1) / lambda x
    const double t = tr.state_times.back();
    const double c = std::expm1(mode.lambda * t) / mode.lambda;
    double err = 0.0, ref = 0.0;
    for (std::size_t i = 0; i < mode.x.size(); ++i) {
        err = std::max(err, std::abs(tr.eta.back()[i] - c * mode.x[i]));
        ref = std::max(ref, std::abs(c * mode.x[i]));
    }
    CHECK(err <= 1e-4 * ref);
    EnvelopeReport env = generic_growth_envelope(tr, mode.lambda);
    CHECK(env.pass);
    CHECK(env.worst_ratio == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(env.explicit_pass);
}

TEST_CASE("energy defect shrinks quadratically in dt") {
    auto f = forms_at(0.5);
    Vec u0 = smooth_random_field(f->mesh, 7), v0 = smooth_random_field(f->mesh, 8);
    double d1 = energy_identity_check(integrate(f, u0, v0, 2e-3, 2.0));
    double d2 = energy_identity_check(integrate(f, u0, v0, 4e-3, 2.0));
    CHECK(d1 < 1e-4);
    CHECK(d2 / d1 > 3.3);
    CHECK(d2 / d1 < 4.7);
    // over a horizon of several e-folds the growing part sets the energy scale
    const double lam = 0.2843;
    double dl = energy_identity_check(integrate(f, u0, v0, default_dt(lam), 5.0 / lam));
    CHECK(dl <= 1e-6);
}

TEST_CASE("explicit envelope holds at a stable frequency") {
    auto f = forms_at(1.5);
    Vec u0 = smooth_random_field(f->mesh, 9), v0 = smooth_random_field(f->mesh, 10);
    ModeTrajectory tr = integrate(f, u0, v0, 1e-2, 10.0);
    EnvelopeReport env = generic_growth_envelope(tr, 0.28);
    CHECK(env.explicit_pass);
    CHECK(env.explicit_ratio_v <= 1.0);
    CHECK(env.explicit_ratio_dv <= 1.0);
}

TEST_CASE("input checks") {
    auto f = forms_at(0.5, 8);
    Vec z(f->n(), 0.0), bad(3, 0.0);
    CHECK_THROWS_AS(integrate(f, bad, z, 1e-2, 1.0), LayoutError);
    CHECK_THROWS_AS(integrate(f, z, z, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(integrate(f, z, z, 1e-2, 1e-3), DomainError);
    CHECK(default_dt(0.5) == 1e-3);
    CHECK(default_dt(10.0) == doctest::Approx(1e-4));
}

TEST_CASE("lattice point order") {
    auto pts = smallest_lattice_points(9);
    REQUIRE(pts.size() == 9);
    CHECK(pts[0] == std::array<int, 2>{0, 0});
    CHECK(pts[1] == std::array<int, 2>{-1, 0});
    CHECK(pts[2] == std::array<int, 2>{0, -1});
    CHECK(pts[3] == std::array<int, 2>{0, 1});
    CHECK(pts[4] == std::array<int, 2>{1, 0});
    for (int i = 5; i < 9; ++i) CHECK(pts[i][0] * pts[i][0] + pts[i][1] * pts[i][1] == 2);
}

TEST_CASE("periodic stability") {
    auto p = oracle::default_profile();
    Mesh m = Mesh::uniform(1, 1, 32, 32);
    std::vector<LatticeModeData> zero;
    Vec z = Vec(m.n_dofs(), 0.0);
    for (auto k : smallest_lattice_points(3)) zero.push_back({k[0], k[1], z, z});
    PeriodicStabilityReport r0 = periodic_stability_check(p, m, 0.3, zero, 1.0);
    CHECK(r0.K1 == 0.0);
    CHECK(r0.K2 == 0.0);

    std::vector<LatticeModeData> data;
    unsigned s = 20;
    for (auto k : smallest_lattice_points(4)) {
        data.push_back({k[0], k[1], smooth_random_field(m, s), smooth_random_field(m, s + 1)});
        s += 2;
    }
    PeriodicStabilityReport r = periodic_stability_check(p, m, 0.3, data, 10.0, 1e-2, 2);
    CHECK(r.pass);
    CHECK(r.min_E0_eig >= -1e-9);
    CHECK(r.K1 > 0.0);
    CHECK(r.bound_v_ratio <= 1.0 + 1e-12);
    CHECK(r.ps0_ratio <= 1.0);
    CHECK(r.ps00_ratio <= 1.0);
    CHECK_THROWS_AS(periodic_stability_check(p, m, 1.0, data, 1.0), ConfigError);
    CHECK_THROWS_AS(periodic_stability_check(p, m, 0.0, data, 1.0), ConfigError);
}
