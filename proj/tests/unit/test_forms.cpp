#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "rtgrowth/eigensolver.hpp"
#include "rtgrowth/errors.hpp"
#include "rtgrowth/forms.hpp"
#include "rtgrowth/quadrature.hpp"

using namespace rtg;

TEST_CASE("mesh layout") {
    Mesh m = Mesh::uniform(1, 1, 4, 4, 2, 3);
    CHECK(m.n_nodes() == 17);
    CHECK(m.n_dofs() == 30);
    CHECK(m.node_x(m.interface_node()) == 0.0);
    CHECK(m.dof(0, 0) == -1);
    CHECK(m.dof(16, 1) == -1);
    CHECK(m.psi0_dof() == m.dof(8, 1));
    CHECK(m.bandwidth() == 5);
    Vec x = m.interpolate([](double z) { return z * z; }, [](double z) { return std::sin(z); });
    FieldSample f = m.eval(x, 0.3, Side::upper);
    CHECK(f.phi == doctest::Approx(0.09).epsilon(1e-12));  // quadratics are exact
    CHECK(f.dphi == doctest::Approx(0.6).epsilon(1e-12));
    CHECK_THROWS_AS(m.eval(x, 1.5, Side::upper), DomainError);
}

TEST_CASE("forms at the origin and sign structure") {
    auto p = oracle::default_profile();
    FormSet f = assemble(p, Mesh::uniform(1, 1, 32, 32), 1.0);
    Vec zero(f.n(), 0.0);
    CHECK(f.E0.quad(zero) == 0.0);
    CHECK(f.E1.quad(zero) == 0.0);
    CHECK(f.J.quad(zero) == 0.0);
    Vec x = f.mesh.interpolate([](double z) { return 1 - z * z; }, [](double z) { return 1 - z * z; });
    CHECK(f.E1.quad(x) >= 0.0);
    CHECK(oracle::smallest(f.J, f.J) == doctest::Approx(1.0));
    CHECK(oracle::smallest(f.E1, f.J) > 0.0);
    // E0 + g xi J is positive semidefinite
    for (double xi : {0.3, 1.0, 3.0, 8.0}) {
        FormSet h = assemble(p, Mesh::uniform(1, 1, 24, 24), xi);
        CHECK(oracle::smallest(h.E0.axpy(h.g * xi, h.J), h.J) >= -1e-9);
    }
    CHECK_THROWS_AS(assemble(p, f.mesh, 0.0), DomainError);
    CHECK_NOTHROW(assemble_lattice_mode(p, f.mesh, 0.0));
}

TEST_CASE("form_value decomposition and monotonicity in s") {
    auto p = oracle::default_profile();
    FormSet f = assemble(p, Mesh::uniform(1, 1, 32, 32), 1.0);
    Vec x = f.mesh.interpolate([](double z) { return std::cos(z); }, [](double z) { return 1 + z; });
    CHECK(form_value(f, x, 0.0) == doctest::Approx(f.E0.quad(x)));
    CHECK(form_value(f, x, 2.0) > form_value(f, x, 1.0));
    CHECK_THROWS_AS(form_value(f, Vec(3, 1.0), 0.0), LayoutError);
}

TEST_CASE("test family reproduces the reduced energy") {
    // psi = (1 - x^2/d^2)^2 with d = m or ell, phi = -psi'/xi: psi' + xi phi = 0, so
    // E0 = sigma xi^2 psi(0)^2 / 2 + int g rho0 psi psi'
    auto p = oracle::default_profile();
    const double xi = 1.0, g = 1.0, sigma = 0.1;
    auto psi = [](double z) { return (1 - z * z) * (1 - z * z); };
    auto dpsi = [](double z) { return -4 * z * (1 - z * z); };
    double ref = 0.5 * sigma * xi * xi;
    ref += integrate_adaptive([&](double z) { return g * p.rho0(Side::lower, z) * psi(z) * dpsi(z); }, -1, 0);
    ref += integrate_adaptive([&](double z) { return g * p.rho0(Side::upper, z) * psi(z) * dpsi(z); }, 0, 1);
    FormSet f = assemble(p, Mesh::uniform(1, 1, 256, 256), xi);
    Vec x = f.mesh.interpolate([&](double z) { return -dpsi(z) / xi; }, psi);
    CHECK(f.E0.quad(x) == doctest::Approx(ref).epsilon(1e-6));
    // sigma xi^2 < g [[rho0]]: the normalized pair has negative energy for small s
    double J = f.J.quad(x);
    CHECK(form_value(f, x, 1e-3) / J < 0.0);
}

TEST_CASE("completed square assembly converges to the direct one") {
    auto p = oracle::default_profile();
    auto phi = [](double z) { return std::sin(3 * z) * (1 - z * z); };
    auto psi = [](double z) { return std::exp(z) * (1 - z * z); };
    std::vector<double> diff;
    for (int n : {2, 4, 8}) {
        FormSet f = assemble(p, Mesh::uniform(1, 1, n, n), 1.3);
        Vec x = f.mesh.interpolate(phi, psi);
        diff.push_back(std::abs(f.E0.quad(x) - completed_square_E0(f).quad(x)));
    }
    CHECK(diff[2] < 1e-7);
    CHECK(diff[0] / diff[1] > 8.0);
    CHECK(diff[1] / diff[2] > 8.0);
    FormSet f = assemble(p, Mesh::uniform(1, 1, 128, 128), 1.3);
    Vec x = f.mesh.interpolate(phi, psi);
    CHECK(std::abs(f.E0.quad(x) - completed_square_E0(f).quad(x)) < 1e-8);
}

TEST_CASE("no negative energy above the critical frequency") {
    auto p = oracle::default_profile();
    FormSet f = assemble(p, Mesh::uniform(1, 1, 24, 24), 1.2 * p.xi_c());
    for (double s : {0.0, 0.1, 1.0}) CHECK(oracle::smallest(f, s) >= -1e-9);
}

TEST_CASE("pencil eigenvalues converge at order 2p") {
    auto p = oracle::default_profile();
    std::vector<double> mu;
    for (int n : {8, 16, 32}) mu.push_back(oracle::smallest(assemble(p, Mesh::uniform(1, 1, n, n), 1.0), 0.2));
    double ref = smallest_eig(assemble(p, Mesh::uniform(1, 1, 256, 256), 1.0), 0.2).mu;
    double e0 = std::abs(mu[0] - ref), e1 = std::abs(mu[1] - ref), e2 = std::abs(mu[2] - ref);
    CHECK(std::log2(e0 / e1) > 3.3);
    CHECK(std::log2(e1 / e2) > 3.3);
}
