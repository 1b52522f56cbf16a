#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "rtgrowth/banded.hpp"

using namespace rtg;

namespace {
SymBand random_spd(int n, int kd, unsigned seed) {
    std::mt19937_64 g(seed);
    std::uniform_real_distribution<double> U(-1, 1);
    SymBand A(n, kd);
    for (int j = 0; j < n; ++j) {
        A.set(j, j, 2.0 * kd + 2.0);
        for (int d = 1; d <= kd && j + d < n; ++d) A.set(j + d, j, U(g));
    }
    return A;
}
}  // namespace

TEST_CASE("symmetric band storage against dense") {
    SymBand A = random_spd(50, 5, 3);
    Eigen::MatrixXd D = oracle::dense(A);
    CHECK((D - D.transpose()).norm() == 0.0);
    Eigen::VectorXd x = Eigen::VectorXd::Random(50);
    Vec xv(x.data(), x.data() + 50);
    Vec y = A.apply(xv);
    Eigen::VectorXd yd = D * x;
    for (int i = 0; i < 50; ++i) CHECK(y[i] == doctest::Approx(yd(i)).epsilon(1e-14));
    CHECK(A.quad(xv) == doctest::Approx(x.dot(D * x)).epsilon(1e-13));
    CHECK(A.get(3, 7) == A.get(7, 3));
    CHECK(A.get(0, 10) == 0.0);
    SymBand B = A.axpy(-2.0, A);
    CHECK(oracle::dense(B).norm() == doctest::Approx(D.norm()).epsilon(1e-14));
    CHECK(A.norm_inf() == doctest::Approx(D.cwiseAbs().rowwise().sum().maxCoeff()).epsilon(1e-14));
}

TEST_CASE("band Cholesky and LU solves") {
    SymBand A = random_spd(80, 3, 9);
    Eigen::MatrixXd D = oracle::dense(A);
    Eigen::VectorXd b = Eigen::VectorXd::Random(80);
    Eigen::VectorXd ref = D.ldlt().solve(b);
    BandCholesky C(A);
    REQUIRE(C.ok());
    Vec x = C.solve(Vec(b.data(), b.data() + 80));
    for (int i = 0; i < 80; ++i) CHECK(x[i] == doctest::Approx(ref(i)).epsilon(1e-12));
    // indefinite shift: Cholesky refuses, LU solves
    SymBand S = A;
    for (int i = 0; i < 80; ++i) S.add(i, i, -8.0);
    CHECK_FALSE(BandCholesky(S).ok());
    BandLU L(S);
    REQUIRE(L.ok());
    Vec y(b.data(), b.data() + 80);
    L.solve_inplace(y.data());
    Eigen::VectorXd ref2 = oracle::dense(S).partialPivLu().solve(b);
    for (int i = 0; i < 80; ++i) CHECK(y[i] == doctest::Approx(ref2(i)).epsilon(1e-10));
}
