#pragma once

#include <Eigen/Dense>

#include "rtgrowth/banded.hpp"
#include "rtgrowth/config.hpp"
#include "rtgrowth/forms.hpp"

namespace oracle {

inline Eigen::MatrixXd dense(const rtg::SymBand& A) {
    const int n = A.n();
    std::vector<double> d = A.dense();
    return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        d.data(), n, n);
}

// smallest eigenvalue of the pencil (A, B), B SPD
inline double smallest(const rtg::SymBand& A, const rtg::SymBand& B) {
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(dense(A), dense(B),
                                                                 Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

inline double smallest(const rtg::FormSet& f, double s) {
    return smallest(f.E0.axpy(s, f.E1), f.J);
}

// fixed point of s = sqrt(-mu(s)) by plain bisection on dense solves
inline double growth_rate(const rtg::FormSet& f, double tol = 1e-10) {
    auto F = [&](double s) { return s - std::sqrt(std::max(-smallest(f, s), 0.0)); };
    double lo = 1e-8, hi = std::sqrt(f.g * f.xi) + 1.0;
    if (F(lo) >= 0.0) return 0.0;
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        (F(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

inline rtg::SteadyProfile default_profile() { return rtg::RunConfig::defaults().profile(); }

}  // namespace oracle
