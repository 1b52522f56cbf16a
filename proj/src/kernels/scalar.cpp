#include <cmath>

#include "rtgrowth/kernels.hpp"

namespace rtg::kernels::scalar {

namespace {

void sbmv(int n, int kd, const double* diags, const double* x, double* y) {
    for (int j = 0; j < n; ++j) y[j] = diags[j] * x[j];
    for (int d = 1; d <= kd && d < n; ++d) {
        const double* a = diags + static_cast<long>(d) * n;
        for (int j = 0; j + d < n; ++j) {
            y[j + d] += a[j] * x[j];
            y[j] += a[j] * x[j + d];
        }
    }
}

double sym_quad(int n, int kd, const double* diags, const double* x) {
    double diag = 0.0, off = 0.0;
    for (int j = 0; j < n; ++j) diag += diags[j] * x[j] * x[j];
    for (int d = 1; d <= kd && d < n; ++d) {
        const double* a = diags + static_cast<long>(d) * n;
        for (int j = 0; j + d < n; ++j) off += a[j] * x[j] * x[j + d];
    }
    return diag + 2.0 * off;
}

double dot(int n, const double* a, const double* b) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

void plane_wave_sums(int n, const double* c, const double* s, double r, double x1, double x2,
                     double* out) {
    double acc[6] = {0, 0, 0, 0, 0, 0};
    for (int j = 0; j < n; ++j) {
        double t = r * (x1 * c[j] + x2 * s[j]);
        double ct = std::cos(t), st = std::sin(t);
        acc[0] += ct;
        acc[1] += st;
        acc[2] += c[j] * ct;
        acc[3] += c[j] * st;
        acc[4] += s[j] * ct;
        acc[5] += s[j] * st;
    }
    for (int k = 0; k < 6; ++k) out[k] = acc[k];
}

}  // namespace

const Table table{sbmv, sym_quad, dot, plane_wave_sums};

}  // namespace rtg::kernels::scalar
