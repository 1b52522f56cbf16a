#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "rtgrowth/kernels.hpp"

using namespace rtg;

namespace {
std::vector<double> rand_vec(std::size_t n, unsigned seed, double lo = -1, double hi = 1) {
    std::mt19937_64 g(seed);
    std::uniform_real_distribution<double> U(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v) x = U(g);
    return v;
}
}  // namespace

TEST_CASE("simd kernels agree with the scalar reference") {
    if (!kernels::isa_available(kernels::Isa::avx2)) {
        MESSAGE("AVX2 not available; only the scalar table is exercised");
        return;
    }
    const auto& S = kernels::table_for(kernels::Isa::scalar);
    const auto& V = kernels::table_for(kernels::Isa::avx2);
    for (int n : {1, 3, 7, 8, 33, 1000}) {
        for (int kd : {0, 1, 3, 5}) {
            auto d = rand_vec(static_cast<std::size_t>(kd + 1) * n, 10 * n + kd);
            auto x = rand_vec(n, 7 * n + kd);
            std::vector<double> ys(n), yv(n);
            S.sbmv(n, kd, d.data(), x.data(), ys.data());
            V.sbmv(n, kd, d.data(), x.data(), yv.data());
            for (int i = 0; i < n; ++i) CHECK(yv[i] == doctest::Approx(ys[i]).epsilon(1e-13).scale(1));
            double qs = S.sym_quad(n, kd, d.data(), x.data());
            double qv = V.sym_quad(n, kd, d.data(), x.data());
            CHECK(qv == doctest::Approx(qs).epsilon(1e-12).scale(1));
        }
        auto a = rand_vec(n, 1), b = rand_vec(n, 2);
        CHECK(V.dot(n, a.data(), b.data()) ==
              doctest::Approx(S.dot(n, a.data(), b.data())).epsilon(1e-13).scale(1));
    }
}

TEST_CASE("simd plane wave sums agree with the scalar reference") {
    if (!kernels::isa_available(kernels::Isa::avx2)) return;
    const auto& S = kernels::table_for(kernels::Isa::scalar);
    const auto& V = kernels::table_for(kernels::Isa::avx2);
    for (int n : {2, 5, 16, 64, 101}) {
        std::vector<double> c(n), s(n);
        for (int j = 0; j < n; ++j) {
            c[j] = std::cos(2 * M_PI * j / n);
            s[j] = std::sin(2 * M_PI * j / n);
        }
        for (double r : {0.3, 2.0, 40.0})
            for (double x1 : {-7.0, 0.0, 3.3}) {
                double os[6], ov[6];
                S.plane_wave_sums(n, c.data(), s.data(), r, x1, 1.7, os);
                V.plane_wave_sums(n, c.data(), s.data(), r, x1, 1.7, ov);
                for (int k = 0; k < 6; ++k) CHECK(std::abs(os[k] - ov[k]) <= 1e-13 * n);
            }
    }
}

TEST_CASE("vector sincos matches libm") {
    if (!kernels::isa_available(kernels::Isa::avx2)) return;
    auto x = rand_vec(4000, 5, -1e4, 1e4);
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); i += 4) {
        double s[4], c[4];
        kernels::avx2::sincos4(&x[i], s, c);
        for (int k = 0; k < 4; ++k) {
            worst = std::max(worst, std::abs(s[k] - std::sin(x[i + k])));
            worst = std::max(worst, std::abs(c[k] - std::cos(x[i + k])));
        }
    }
    CHECK(worst <= 1e-14);
    double s[4], c[4], z[4] = {0.0, -0.0, M_PI / 2, -M_PI};
    kernels::avx2::sincos4(z, s, c);
    CHECK(s[0] == 0.0);
    CHECK(c[0] == 1.0);
    CHECK(s[2] == doctest::Approx(1.0).epsilon(1e-16));
    CHECK(c[3] == doctest::Approx(-1.0).epsilon(1e-16));
}

TEST_CASE("dispatch can be forced to the scalar path") {
    auto before = kernels::active_isa();
    kernels::force_isa(kernels::Isa::scalar);
    CHECK(kernels::active_isa() == kernels::Isa::scalar);
    CHECK(&kernels::active() == &kernels::table_for(kernels::Isa::scalar));
    kernels::force_isa(before);
    CHECK(kernels::isa_name(kernels::Isa::avx2) == "avx2");
}
