#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "rtgrowth/eigensolver.hpp"
#include "rtgrowth/errors.hpp"

using namespace rtg;

TEST_CASE("smallest eigenvalue against the dense oracle") {
    auto p = oracle::default_profile();
    for (double xi : {0.1, 1.0, 3.0})
        for (int n : {8, 24}) {
            FormSet f = assemble(p, Mesh::uniform(1, 1, n, n), xi);
            for (double s : {1e-6, 0.05, 1.0, 10.0}) {
                EigenResult r = smallest_eig(f, s);
                double ref = oracle::smallest(f, s);
                CHECK(r.mu == doctest::Approx(ref).epsilon(1e-9).scale(1e-3));
                CHECK(f.J.quad(r.minimizer) == doctest::Approx(1.0).epsilon(1e-12));
                double scale = f.E0.norm_inf() + s * f.E1.norm_inf();
                CHECK(r.residual <= 1e-9 * scale);
                CHECK(r.mu >= -f.g * xi - 1e-9);
            }
        }
}

TEST_CASE("sign of mu below and above the critical frequency") {
    auto p = oracle::default_profile();
    Mesh m = Mesh::uniform(1, 1, 256, 256);
    FormSet f = assemble(p, m, 1.0);
    EigenResult r = smallest_eig(f, 1e-6);
    CHECK(r.mu < 0.0);
    CHECK(std::abs(r.minimizer[f.psi0_dof()]) >= 1e-6);
    FormSet h = assemble(p, m, 2.0 * p.xi_c());
    for (double s : {0.01, 0.1, 1.0}) CHECK(smallest_eig(h, s).mu >= -1e-9);
    // small dense cross-check of the same statement
    FormSet hs = assemble(p, Mesh::uniform(1, 1, 16, 16), 2.0 * p.xi_c());
    for (double s : {0.01, 0.1, 1.0}) CHECK(oracle::smallest(hs, s) >= -1e-9);
}

TEST_CASE("mu is increasing and Lipschitz in s") {
    auto p = oracle::default_profile();
    FormSet f = assemble(p, Mesh::uniform(1, 1, 64, 64), 1.0);
    EigenResult r0 = smallest_eig(f, 0.0), r1 = smallest_eig(f, 1.0);
    CHECK(f.E1.quad(r0.minimizer) > 0.0);
    CHECK(r0.mu < r1.mu);
    double prev = -INFINITY, K = 0.0;
    std::vector<double> s, mu;
    for (int i = 0; i < 12; ++i) {
        s.push_back(0.01 * std::pow(1000.0, i / 11.0));
        EigenResult r = smallest_eig(f, s.back());
        mu.push_back(r.mu);
        K = std::max(K, f.E1.quad(r.minimizer));
        CHECK(r.mu > prev);
        prev = r.mu;
    }
    for (int i = 0; i + 1 < 12; ++i) CHECK(mu[i + 1] - mu[i] <= K * (s[i + 1] - s[i]));
}

TEST_CASE("c2 lower slope") {
    auto p = oracle::default_profile();
    FormSet f = assemble(p, Mesh::uniform(1, 1, 128, 128), 1.0);
    double c2 = c2_diagnostic(f);
    CHECK(c2 > 0.0);
    CHECK(c2 == doctest::Approx(oracle::smallest(f.E1, f.J)).epsilon(1e-5));
    for (double s : {0.1, 1.0, 10.0}) CHECK(smallest_eig(f, s).mu >= -f.g * f.xi + s * c2 - 1e-8);
    FormSet g = assemble(p, Mesh::uniform(1, 1, 256, 256), 1.0);
    CHECK(std::abs(c2_diagnostic(g) - c2) <= 0.05 * c2);
}

TEST_CASE("generic pencil solver") {
    SymBand A(40, 1), B(40, 1);
    for (int i = 0; i < 40; ++i) {
        A.set(i, i, 2.0);
        if (i + 1 < 40) A.set(i + 1, i, -1.0);
        B.set(i, i, 1.0);
    }
    EigenResult r = smallest_pencil(A, B, 0.0);
    CHECK(r.mu == doctest::Approx(2.0 - 2.0 * std::cos(M_PI / 41)).epsilon(1e-12));
    CHECK(r.iterations > 0);
}
