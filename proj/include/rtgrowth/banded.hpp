#pragma once

#include <vector>

namespace rtg {

using Vec = std::vector<double>;

// Symmetric banded matrix stored by diagonals: diag(d)[j] = A(j + d, j).
class SymBand {
public:
    SymBand() = default;
    SymBand(int n, int kd);

    int n() const { return n_; }
    int kd() const { return kd_; }

    // i, j within the band; order does not matter.
    double get(int i, int j) const;
    void add(int i, int j, double v);
    void set(int i, int j, double v);

    const double* data() const { return a_.data(); }
    double* data() { return a_.data(); }

    // y = A x through the active SIMD kernel.
    void apply(const double* x, double* y) const;
    Vec apply(const Vec& x) const;
    // x^T A x
    double quad(const Vec& x) const;
    double quad(const double* x) const;
    // infinity norm
    double norm_inf() const;

    // this + alpha * other (same shape)
    SymBand axpy(double alpha, const SymBand& other) const;
    // LAPACK lower band storage, ldab = kd + 1, column major.
    std::vector<double> lapack_lower() const;
    // dense copy, row major n x n
    std::vector<double> dense() const;

private:
    int n_ = 0, kd_ = 0;
    std::vector<double> a_;
};

// Banded Cholesky of an SPD SymBand (LAPACK dpbtrf / dpbtrs).
class BandCholesky {
public:
    BandCholesky() = default;
    // Returns false from ok() instead of throwing when A is not positive definite.
    explicit BandCholesky(const SymBand& A);

    bool ok() const { return ok_; }
    int n() const { return n_; }
    void solve_inplace(double* b) const;
    Vec solve(const Vec& b) const;

private:
    int n_ = 0, kd_ = 0;
    bool ok_ = false;
    std::vector<double> ab_;
};

// Banded LU of a general (here symmetric) shifted matrix, dgbtrf / dgbtrs.
class BandLU {
public:
    explicit BandLU(const SymBand& A);
    bool ok() const { return ok_; }
    void solve_inplace(double* b) const;

private:
    int n_, kd_;
    bool ok_ = false;
    std::vector<double> ab_;
    std::vector<int> ipiv_;
};

}  // namespace rtg
