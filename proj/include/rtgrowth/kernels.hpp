#pragma once

#include <string>

namespace rtg::kernels {

// Symmetric banded matrices are passed as diagonals: diags[d * n + j] = A(j + d, j)
// for d = 0..kd and j < n - d.
struct Table {
    void (*sbmv)(int n, int kd, const double* diags, const double* x, double* y);
    double (*sym_quad)(int n, int kd, const double* diags, const double* x);
    double (*dot)(int n, const double* a, const double* b);
    // out = {sum cos t, sum sin t, sum c cos t, sum c sin t, sum s cos t, sum s sin t}
    // with t_j = r (x1 c_j + x2 s_j).
    void (*plane_wave_sums)(int n, const double* c, const double* s, double r, double x1,
                            double x2, double* out);
};

enum class Isa { scalar, avx2 };

bool isa_available(Isa isa);
const Table& table_for(Isa isa);

// Active table. Chosen once from the CPU; RTGROWTH_SIMD=scalar forces the
// reference path.
const Table& active();
Isa active_isa();
void force_isa(Isa isa);
std::string isa_name(Isa isa);

namespace scalar {
extern const Table table;
}
namespace avx2 {
extern const Table table;
bool compiled();
// Exposed for tests.
void sincos4(const double* x, double* s, double* c);
}  // namespace avx2

}  // namespace rtg::kernels
