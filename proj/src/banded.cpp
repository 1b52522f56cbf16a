#include "rtgrowth/banded.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "rtgrowth/errors.hpp"
#include "rtgrowth/kernels.hpp"

namespace rtg {

SymBand::SymBand(int n, int kd) : n_(n), kd_(kd), a_(static_cast<std::size_t>(kd + 1) * n, 0.0) {
    if (n < 1 || kd < 0) throw LayoutError("SymBand: bad shape");
}

double SymBand::get(int i, int j) const {
    if (i < j) std::swap(i, j);
    int d = i - j;
    if (d > kd_) return 0.0;
    return a_[static_cast<std::size_t>(d) * n_ + j];
}

void SymBand::add(int i, int j, double v) {
    if (i < j) std::swap(i, j);
    int d = i - j;
    if (d > kd_) throw LayoutError("SymBand: entry outside band");
    a_[static_cast<std::size_t>(d) * n_ + j] += v;
}

void SymBand::set(int i, int j, double v) {
    if (i < j) std::swap(i, j);
    int d = i - j;
    if (d > kd_) throw LayoutError("SymBand: entry outside band");
    a_[static_cast<std::size_t>(d) * n_ + j] = v;
}

void SymBand::apply(const double* x, double* y) const {
    kernels::active().sbmv(n_, kd_, a_.data(), x, y);
}

Vec SymBand::apply(const Vec& x) const {
    if (static_cast<int>(x.size()) != n_) throw LayoutError("SymBand::apply: size mismatch");
    Vec y(n_);
    apply(x.data(), y.data());
    return y;
}

double SymBand::quad(const double* x) const {
    return kernels::active().sym_quad(n_, kd_, a_.data(), x);
}

double SymBand::quad(const Vec& x) const {
    if (static_cast<int>(x.size()) != n_) throw LayoutError("SymBand::quad: size mismatch");
    return quad(x.data());
}

double SymBand::norm_inf() const {
    double best = 0.0;
    for (int i = 0; i < n_; ++i) {
        double row = 0.0;
        for (int j = std::max(0, i - kd_); j <= std::min(n_ - 1, i + kd_); ++j)
            row += std::abs(get(i, j));
        best = std::max(best, row);
    }
    return best;
}

SymBand SymBand::axpy(double alpha, const SymBand& other) const {
    if (other.n_ != n_ || other.kd_ != kd_) throw LayoutError("SymBand::axpy: shape mismatch");
    SymBand r = *this;
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] += alpha * other.a_[k];
    return r;
}

std::vector<double> SymBand::lapack_lower() const {
    const int ld = kd_ + 1;
    std::vector<double> ab(static_cast<std::size_t>(ld) * n_, 0.0);
    for (int j = 0; j < n_; ++j)
        for (int d = 0; d <= kd_ && j + d < n_; ++d)
            ab[static_cast<std::size_t>(j) * ld + d] = a_[static_cast<std::size_t>(d) * n_ + j];
    return ab;
}

std::vector<double> SymBand::dense() const {
    std::vector<double> A(static_cast<std::size_t>(n_) * n_, 0.0);
    for (int d = 0; d <= kd_; ++d)
        for (int j = 0; j + d < n_; ++j) {
            double v = a_[static_cast<std::size_t>(d) * n_ + j];
            A[static_cast<std::size_t>(j + d) * n_ + j] = v;
            A[static_cast<std::size_t>(j) * n_ + j + d] = v;
        }
    return A;
}

BandCholesky::BandCholesky(const SymBand& A) : n_(A.n()), kd_(A.kd()), ab_(A.lapack_lower()) {
    lapack_int info =
        LAPACKE_dpbtrf(LAPACK_COL_MAJOR, 'L', n_, kd_, ab_.data(), kd_ + 1);
    ok_ = info == 0;
}

void BandCholesky::solve_inplace(double* b) const {
    if (!ok_) throw SolverError("BandCholesky: matrix not positive definite");
    LAPACKE_dpbtrs(LAPACK_COL_MAJOR, 'L', n_, kd_, 1, ab_.data(), kd_ + 1, b, n_);
}

Vec BandCholesky::solve(const Vec& b) const {
    Vec x = b;
    solve_inplace(x.data());
    return x;
}

BandLU::BandLU(const SymBand& A) : n_(A.n()), kd_(A.kd()) {
    // general band storage with kl = ku = kd, ldab = 3 kd + 1
    const int ld = 3 * kd_ + 1;
    ab_.assign(static_cast<std::size_t>(ld) * n_, 0.0);
    ipiv_.assign(n_, 0);
    for (int j = 0; j < n_; ++j)
        for (int i = std::max(0, j - kd_); i <= std::min(n_ - 1, j + kd_); ++i)
            ab_[static_cast<std::size_t>(j) * ld + (2 * kd_ + i - j)] = A.get(i, j);
    lapack_int info =
        LAPACKE_dgbtrf(LAPACK_COL_MAJOR, n_, n_, kd_, kd_, ab_.data(), ld, ipiv_.data());
    ok_ = info == 0;
}

void BandLU::solve_inplace(double* b) const {
    if (!ok_) throw SolverError("BandLU: singular matrix");
    LAPACKE_dgbtrs(LAPACK_COL_MAJOR, 'N', n_, kd_, kd_, 1, ab_.data(), 3 * kd_ + 1, ipiv_.data(),
                   b, n_);
}

}  // namespace rtg
