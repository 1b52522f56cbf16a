#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rtgrowth/eigensolver.hpp"
#include "rtgrowth/forms.hpp"

namespace rtg {

struct ModeDiagnostics {
    double ode_residual = 0.0;     // max strong-form residual at element midpoints
    double jump_phi = 0.0;         // [[phi]]
    double jump_psi = 0.0;         // [[psi]]
    double jump_tangential = 0.0;  // [[lambda eps0 (phi' - xi psi)]]
    double jump_normal = 0.0;      // [[B (psi' + xi phi)]] + [[lambda eps0 (psi' - xi phi)]] - sigma xi^2 psi(0)
    double psi0 = 0.0;
    double fixed_point_residual = 0.0;
    double eig_residual = 0.0;
};

struct ModeSolution {
    double xi = 0.0;          // magnitude; the reduced frame uses xi = (|xi|, 0)
    double lambda = 0.0;
    double s_star = 0.0;
    double mu = 0.0;          // mu(s_star) = -lambda^2 up to the fixed-point tolerance
    Mesh mesh;
    Vec x;                    // dof vector, x^T J x = 1, psi(0) > 0
    ModeDiagnostics diag;

    void nodal(Vec& phi, Vec& psi) const { mesh.unpack(x, phi, psi); }
};

struct Stable {
    double xi = 0.0;
    std::string reason;
    bool resolution_warning = false;
};

using GrowthOutcome = std::variant<ModeSolution, Stable>;

inline bool is_unstable(const GrowthOutcome& o) { return std::holds_alternative<ModeSolution>(o); }
inline const ModeSolution& mode_of(const GrowthOutcome& o) { return std::get<ModeSolution>(o); }

struct GrowthOptions {
    double fp_tol = 1e-9;
    double s_lo = 1e-8;
    int max_doublings = 60;
    EigenOptions eig;
};

GrowthOutcome growth_rate(const SteadyProfile& profile, const Mesh& mesh, double xi_mag,
                          const GrowthOptions& opt = {});

// Strong-form residual and interface jumps for a solved mode.
ModeDiagnostics mode_diagnostics(const SteadyProfile& profile, const ModeSolution& mode);

struct DispersionSample {
    double xi = 0.0;
    GrowthOutcome outcome;
    double lambda() const { return is_unstable(outcome) ? mode_of(outcome).lambda : 0.0; }
};

struct LatticePoint {
    int k1 = 0, k2 = 0;
    double xi = 0.0;
    double lambda = 0.0;
};

struct DispersionCurve {
    std::vector<DispersionSample> samples;  // sorted by xi
    double Lambda = 0.0;
    double argmax = 0.0;
    double sample_max = 0.0;
    double fit_tolerance = 0.0;  // |solved - fitted| at the refined point
    bool refined = false;

    // lattice variant
    bool lattice = false;
    double L = 0.0;
    std::vector<LatticePoint> points;
    bool certificate = false;  // stable: empty unstable set
    double Lambda_L = 0.0;
};

DispersionCurve sweep(const SteadyProfile& profile, const Mesh& mesh, double xi_min, double xi_max,
                      int n, const GrowthOptions& opt = {}, int threads = 1);

// xi_cap bounds the enumeration when sigma = 0.
DispersionCurve lattice_modes(const SteadyProfile& profile, const Mesh& mesh, double L,
                              std::optional<double> xi_cap = std::nullopt,
                              const GrowthOptions& opt = {}, int threads = 1);

// Runs f(i) for i in [0, n) over `threads` workers; results are written by index.
template <class F>
void parallel_for(int n, int threads, F&& f);

}  // namespace rtg

#include <thread>

namespace rtg {
template <class F>
void parallel_for(int n, int threads, F&& f) {
    if (threads <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) f(i);
        return;
    }
    threads = std::min(threads, n);
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errs(threads);
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&, t] {
            try {
                for (int i = t; i < n; i += threads) f(i);
            } catch (...) {
                errs[t] = std::current_exception();
            }
        });
    for (auto& th : pool) th.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
}
}  // namespace rtg
