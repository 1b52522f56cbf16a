#include <cmath>

#include "rtgrowth/kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>

namespace rtg::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

// Cody-Waite reduction by pi/4 with cephes minimax polynomials. sin is odd and
// cos even in the input, bit for bit.
inline void sincos_pd(__m256d x, __m256d& s, __m256d& c) {
    const __m256d sign_mask = _mm256_set1_pd(-0.0);
    const __m256d DP1 = _mm256_set1_pd(7.85398125648498535156E-1);
    const __m256d DP2 = _mm256_set1_pd(3.77489470793079817668E-8);
    const __m256d DP3 = _mm256_set1_pd(2.69515142907905952645E-15);
    const __m256d FOPI = _mm256_set1_pd(1.27323954473516268615);
    const __m256d one = _mm256_set1_pd(1.0), two = _mm256_set1_pd(2.0);
    const __m256d half = _mm256_set1_pd(0.5), eighth = _mm256_set1_pd(0.125);
    const __m256d four = _mm256_set1_pd(4.0);

    __m256d xsign = _mm256_and_pd(x, sign_mask);
    __m256d ax = _mm256_andnot_pd(sign_mask, x);

    __m256d y = _mm256_floor_pd(_mm256_mul_pd(ax, FOPI));
    __m256d odd = _mm256_sub_pd(y, _mm256_mul_pd(two, _mm256_floor_pd(_mm256_mul_pd(y, half))));
    y = _mm256_add_pd(y, odd);
    // quadrant q = (y / 2) mod 4
    __m256d q = _mm256_sub_pd(_mm256_mul_pd(y, half),
                              _mm256_mul_pd(four, _mm256_floor_pd(_mm256_mul_pd(y, eighth))));

    __m256d z = _mm256_fnmadd_pd(y, DP1, ax);
    z = _mm256_fnmadd_pd(y, DP2, z);
    z = _mm256_fnmadd_pd(y, DP3, z);
    __m256d zz = _mm256_mul_pd(z, z);

    __m256d ps = _mm256_set1_pd(1.58962301576546568060E-10);
    ps = _mm256_fmadd_pd(ps, zz, _mm256_set1_pd(-2.50507477628578072866E-8));
    ps = _mm256_fmadd_pd(ps, zz, _mm256_set1_pd(2.75573136213857245213E-6));
    ps = _mm256_fmadd_pd(ps, zz, _mm256_set1_pd(-1.98412698295895385996E-4));
    ps = _mm256_fmadd_pd(ps, zz, _mm256_set1_pd(8.33333333332211858878E-3));
    ps = _mm256_fmadd_pd(ps, zz, _mm256_set1_pd(-1.66666666666666307295E-1));
    __m256d sz = _mm256_fmadd_pd(_mm256_mul_pd(z, zz), ps, z);

    __m256d pc = _mm256_set1_pd(-1.13585365213876817300E-11);
    pc = _mm256_fmadd_pd(pc, zz, _mm256_set1_pd(2.08757008419747316778E-9));
    pc = _mm256_fmadd_pd(pc, zz, _mm256_set1_pd(-2.75573141792967388112E-7));
    pc = _mm256_fmadd_pd(pc, zz, _mm256_set1_pd(2.48015872888517045348E-5));
    pc = _mm256_fmadd_pd(pc, zz, _mm256_set1_pd(-1.38888888888730564116E-3));
    pc = _mm256_fmadd_pd(pc, zz, _mm256_set1_pd(4.16666666666665929218E-2));
    __m256d cz = _mm256_fmadd_pd(_mm256_mul_pd(zz, zz), pc, _mm256_fnmadd_pd(half, zz, one));

    __m256d q1 = _mm256_cmp_pd(q, one, _CMP_EQ_OQ);
    __m256d q2 = _mm256_cmp_pd(q, two, _CMP_EQ_OQ);
    __m256d q3 = _mm256_cmp_pd(q, _mm256_set1_pd(3.0), _CMP_EQ_OQ);
    __m256d swap = _mm256_or_pd(q1, q3);
    __m256d sv = _mm256_blendv_pd(sz, cz, swap);
    __m256d cv = _mm256_blendv_pd(cz, sz, swap);
    __m256d sneg = _mm256_and_pd(_mm256_or_pd(q2, q3), sign_mask);
    __m256d cneg = _mm256_and_pd(_mm256_or_pd(q1, q2), sign_mask);
    s = _mm256_xor_pd(_mm256_xor_pd(sv, sneg), xsign);
    c = _mm256_xor_pd(cv, cneg);
}

void sbmv(int n, int kd, const double* diags, const double* x, double* y) {
    int j = 0;
    for (; j + 4 <= n; j += 4)
        _mm256_storeu_pd(y + j, _mm256_mul_pd(_mm256_loadu_pd(diags + j), _mm256_loadu_pd(x + j)));
    for (; j < n; ++j) y[j] = diags[j] * x[j];
    for (int d = 1; d <= kd && d < n; ++d) {
        const double* a = diags + static_cast<long>(d) * n;
        const int m = n - d;
        int i = 0;
        for (; i + 4 <= m; i += 4) {
            __m256d av = _mm256_loadu_pd(a + i);
            __m256d lo = _mm256_loadu_pd(y + i + d);
            _mm256_storeu_pd(y + i + d, _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), lo));
        }
        for (; i < m; ++i) y[i + d] += a[i] * x[i];
        i = 0;
        for (; i + 4 <= m; i += 4) {
            __m256d av = _mm256_loadu_pd(a + i);
            __m256d up = _mm256_loadu_pd(y + i);
            _mm256_storeu_pd(y + i, _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i + d), up));
        }
        for (; i < m; ++i) y[i] += a[i] * x[i + d];
    }
}

double sym_quad(int n, int kd, const double* diags, const double* x) {
    __m256d dacc = _mm256_setzero_pd(), oacc = _mm256_setzero_pd();
    double dtail = 0.0, otail = 0.0;
    int j = 0;
    for (; j + 4 <= n; j += 4) {
        __m256d xv = _mm256_loadu_pd(x + j);
        dacc = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_loadu_pd(diags + j), xv), xv, dacc);
    }
    for (; j < n; ++j) dtail += diags[j] * x[j] * x[j];
    for (int d = 1; d <= kd && d < n; ++d) {
        const double* a = diags + static_cast<long>(d) * n;
        const int m = n - d;
        int i = 0;
        for (; i + 4 <= m; i += 4) {
            __m256d p = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(x + i));
            oacc = _mm256_fmadd_pd(p, _mm256_loadu_pd(x + i + d), oacc);
        }
        for (; i < m; ++i) otail += a[i] * x[i] * x[i + d];
    }
    return (hsum(dacc) + dtail) + 2.0 * (hsum(oacc) + otail);
}

double dot(int n, const double* a, const double* b) {
    __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
    int i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    }
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

void plane_wave_sums(int n, const double* c, const double* s, double r, double x1, double x2,
                     double* out) {
    __m256d acc[6];
    for (auto& a : acc) a = _mm256_setzero_pd();
    const __m256d rv = _mm256_set1_pd(r), x1v = _mm256_set1_pd(x1), x2v = _mm256_set1_pd(x2);
    int j = 0;
    for (; j + 4 <= n; j += 4) {
        __m256d cv = _mm256_loadu_pd(c + j), sv = _mm256_loadu_pd(s + j);
        __m256d t = _mm256_mul_pd(rv, _mm256_fmadd_pd(x1v, cv, _mm256_mul_pd(x2v, sv)));
        __m256d st, ct;
        sincos_pd(t, st, ct);
        acc[0] = _mm256_add_pd(acc[0], ct);
        acc[1] = _mm256_add_pd(acc[1], st);
        acc[2] = _mm256_fmadd_pd(cv, ct, acc[2]);
        acc[3] = _mm256_fmadd_pd(cv, st, acc[3]);
        acc[4] = _mm256_fmadd_pd(sv, ct, acc[4]);
        acc[5] = _mm256_fmadd_pd(sv, st, acc[5]);
    }
    for (int k = 0; k < 6; ++k) out[k] = hsum(acc[k]);
    for (; j < n; ++j) {
        double t = r * (x1 * c[j] + x2 * s[j]);
        double ct = std::cos(t), st = std::sin(t);
        out[0] += ct;
        out[1] += st;
        out[2] += c[j] * ct;
        out[3] += c[j] * st;
        out[4] += s[j] * ct;
        out[5] += s[j] * st;
    }
}

}  // namespace

bool compiled() { return true; }

void sincos4(const double* x, double* s, double* c) {
    __m256d sv, cv;
    sincos_pd(_mm256_loadu_pd(x), sv, cv);
    _mm256_storeu_pd(s, sv);
    _mm256_storeu_pd(c, cv);
}

const Table table{sbmv, sym_quad, dot, plane_wave_sums};

}  // namespace rtg::kernels::avx2

#else

namespace rtg::kernels::avx2 {
bool compiled() { return false; }
void sincos4(const double* x, double* s, double* c) {
    for (int i = 0; i < 4; ++i) s[i] = std::sin(x[i]), c[i] = std::cos(x[i]);
}
const Table table = scalar::table;
}  // namespace rtg::kernels::avx2

#endif
