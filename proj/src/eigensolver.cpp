#include "rtgrowth/eigensolver.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

#include "rtgrowth/errors.hpp"
#include "rtgrowth/kernels.hpp"

namespace rtg {

namespace {

struct LanczosOut {
    double theta;
    Vec x;
    int iters;
    bool converged;
};

LanczosOut lanczos_top(const BandCholesky& K, const SymBand& B, int max_it, double tol,
                       unsigned seed) {
    const int n = B.n();
    const auto& kt = kernels::active();
    max_it = std::min(max_it, n);
    std::vector<Vec> V;
    std::vector<double> alpha, beta;
    Vec v(n), Bv(n), w(n), Bw(n);
    for (int i = 0; i < n; ++i) v[i] = 1.0 + 0.5 * std::sin(1.3 * (i + 1) + 0.7 * seed);
    B.apply(v.data(), Bv.data());
    double nv = std::sqrt(kt.dot(n, v.data(), Bv.data()));
    for (int i = 0; i < n; ++i) v[i] /= nv, Bv[i] /= nv;
    std::vector<Vec> BV;
    V.push_back(v);
    BV.push_back(Bv);

    double prev_theta = 0.0;
    Eigen::VectorXd y;
    double theta = 0.0;
    for (int k = 0; k < max_it; ++k) {
        w = BV[k];
        K.solve_inplace(w.data());
        double a = kt.dot(n, BV[k].data(), w.data());
        alpha.push_back(a);
        // full reorthogonalization, two passes
        for (int pass = 0; pass < 2; ++pass) {
            for (int i = 0; i <= k; ++i) {
                double c = kt.dot(n, BV[i].data(), w.data());
                const double* vi = V[i].data();
                for (int j = 0; j < n; ++j) w[j] -= c * vi[j];
            }
        }
        B.apply(w.data(), Bw.data());
        double b = std::sqrt(std::max(kt.dot(n, w.data(), Bw.data()), 0.0));

        const int m = k + 1;
        Eigen::VectorXd d(m), e(std::max(m - 1, 1));
        for (int i = 0; i < m; ++i) d[i] = alpha[i];
        for (int i = 0; i + 1 < m; ++i) e[i] = beta[i];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
        if (m == 1) {
            theta = d[0];
            y = Eigen::VectorXd::Ones(1);
        } else {
            es.computeFromTridiagonal(d, e.head(m - 1), Eigen::ComputeEigenvectors);
            theta = es.eigenvalues()[m - 1];
            y = es.eigenvectors().col(m - 1);
        }
        double resid = b * std::abs(y[m - 1]);
        bool breakdown = b <= 1e-14 * std::abs(theta);
        bool small = resid <= 1e-10 * std::abs(theta);
        bool flat = k > 0 && std::abs(theta - prev_theta) <= 1e-3 * tol * std::abs(theta);
        if (breakdown || (small && flat) || resid <= 1e-13 * std::abs(theta)) {
            Vec x(n, 0.0);
            for (int i = 0; i < m; ++i) {
                const double* vi = V[i].data();
                for (int j = 0; j < n; ++j) x[j] += y[i] * vi[j];
            }
            return {theta, std::move(x), m, true};
        }
        prev_theta = theta;
        beta.push_back(b);
        for (int j = 0; j < n; ++j) w[j] /= b, Bw[j] /= b;
        V.push_back(w);
        BV.push_back(Bw);
    }
    return {theta, {}, max_it, false};
}

}  // namespace

EigenResult smallest_pencil(const SymBand& A, const SymBand& B, double lower_bound,
                            const EigenOptions& opt) {
    if (A.n() != B.n() || A.kd() != B.kd()) throw LayoutError("pencil shape mismatch");
    const double scale = A.norm_inf() / std::max(1e-300, B.norm_inf());
    const double gap = 1e-2 * (1.0 + std::abs(lower_bound));

    // Shift candidates: just below the hint if it is certified below the
    // spectrum, otherwise below the analytic lower bound.
    std::vector<double> shifts;
    if (opt.hint) {
        double h = *opt.hint;
        shifts.push_back(h - 1e-3 * (1.0 + std::abs(h)));
    }
    shifts.push_back(lower_bound - gap);

    for (double shift : shifts) {
        BandCholesky K(A.axpy(-shift, B));
        if (!K.ok()) continue;
        for (unsigned seed = 0; seed < 3; ++seed) {
            LanczosOut lo = lanczos_top(K, B, opt.max_iterations, opt.tolerance, seed);
            if (!lo.converged) continue;
            Vec& x = lo.x;
            double xBx = B.quad(x);
            double nrm = std::sqrt(xBx);
            for (double& v : x) v /= nrm;
            // shift + 1/theta keeps full relative accuracy; x^T A x would lose
            // digits to the cancellation inside the stiffness part of A.
            double mu = shift + 1.0 / lo.theta;
            // Certify nothing lies below mu.
            double tau = 1e-9 * (1.0 + std::abs(mu)) + 1e-12 * scale;
            BandCholesky cert(A.axpy(-(mu - tau), B));
            if (!cert.ok()) continue;
            Vec Ax = A.apply(x), Bx = B.apply(x);
            double r = 0.0, xn = 0.0;
            for (int i = 0; i < A.n(); ++i) {
                double d = Ax[i] - mu * Bx[i];
                r += d * d;
                xn += x[i] * x[i];
            }
            EigenResult res;
            res.mu = mu;
            res.minimizer = std::move(x);
            res.residual = std::sqrt(r / xn);
            res.iterations = lo.iters;
            return res;
        }
    }
    std::ostringstream os;
    os << "smallest_pencil: no convergence within " << opt.max_iterations
       << " Lanczos steps (n=" << A.n() << ", lower bound " << lower_bound << ")";
    throw SolverError(os.str());
}

void polish_eigenvector(const SymBand& A, const SymBand& B, double mu, Vec& x, int steps) {
    const double delta = 1e-9 * (1.0 + std::abs(mu));
    BandLU lu(A.axpy(-(mu - delta), B));
    if (!lu.ok()) return;
    for (int k = 0; k < steps; ++k) {
        Vec y = B.apply(x);
        lu.solve_inplace(y.data());
        double nrm = std::sqrt(B.quad(y));
        if (!(nrm > 0.0) || !std::isfinite(nrm)) return;
        double sign = kernels::active().dot(A.n(), y.data(), B.apply(x).data()) < 0.0 ? -1.0 : 1.0;
        for (int i = 0; i < A.n(); ++i) x[i] = sign * y[i] / nrm;
    }
}

EigenResult smallest_eig(const FormSet& forms, double s, const EigenOptions& opt) {
    if (!(s >= 0.0)) throw DomainError("smallest_eig: s must be >= 0");
    SymBand A = forms.E0.axpy(s, forms.E1);
    return smallest_pencil(A, forms.J, -forms.g * forms.xi, opt);
}

double c2_diagnostic(const FormSet& forms) {
    return smallest_pencil(forms.E1, forms.J, 0.0).mu;
}

}  // namespace rtg
