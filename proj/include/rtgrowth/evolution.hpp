#pragma once

#include <array>
#include <memory>
#include <optional>
#include <vector>

#include "rtgrowth/banded.hpp"
#include "rtgrowth/dispersion.hpp"
#include "rtgrowth/forms.hpp"

namespace rtg {

// Implicit midpoint for J u'' + E1 u' + E0 u = 0 on (u, w = u'). The step
// matrix J + dt/2 E1 + dt^2/4 E0 is factored once.
class MidpointStepper {
public:
    MidpointStepper(const SymBand& J, const SymBand& E1, const SymBand& E0, double dt);
    double dt() const { return dt_; }
    // Advances (u, w) by one step; returns the midpoint velocity in w_mid if given.
    void step(Vec& u, Vec& w, Vec* w_mid = nullptr) const;

private:
    const SymBand* E0_;
    SymBand M_;  // J - dt/2 E1 - dt^2/4 E0
    std::unique_ptr<BandLU> lu_;
    double dt_;
};

struct LedgerRow {
    double t = 0.0;
    double kinetic = 0.0;         // 1/2 w^T J w
    double potential = 0.0;       // 1/2 u^T E0 u
    double dissipated_cum = 0.0;  // int w^T E1 w dt, trapezoid
    double dissipated_mid = 0.0;  // same integral, midpoint rule (exact for the scheme)
    double norm1 = 0.0;           // ||u||_1 = sqrt(2 u^T J u)
    double norm2 = 0.0;           // ||u||_2 = sqrt(2 u^T E1 u)
    double dnorm1 = 0.0;          // ||u'||_1
    double dnorm2 = 0.0;          // ||u'||_2
};

struct ModeTrajectory {
    std::shared_ptr<const FormSet> forms;
    double dt = 0.0;
    std::vector<LedgerRow> ledger;  // every step, ledger[0] at t = 0
    // states at a stride (always includes first and last step)
    std::vector<double> state_times;
    std::vector<Vec> u, w;
    // displacement eta with eta' = u, when requested
    std::vector<Vec> eta;
};

struct IntegrateOptions {
    int store_stride = 0;  // 0: about 100 stored states
    std::optional<Vec> eta0;
};

ModeTrajectory integrate(std::shared_ptr<const FormSet> forms, const Vec& u0, const Vec& v0,
                         double dt, double T, const IntegrateOptions& opt = {});

// Default step: min(1e-3, 1e-3 / lambda).
double default_dt(double lambda);

// max_n |E_n - E_0 + D_n| / max_n (K_n + |P_n| + D_n), E = kinetic + potential.
double energy_identity_check(const ModeTrajectory& traj);

struct GrowthBoundReport {
    double min_eig = 0.0;  // smallest eigenvalue of (E0 + L E1 + L^2 J, J)
    bool pass = false;
};
GrowthBoundReport growth_bound_check(const FormSet& forms, double Lambda, double tol = 1e-8);

struct EnvelopeReport {
    double C = 0.0;            // fitted at t = 0
    double worst_ratio = 0.0;  // max_t N(t) / (C e^{2 Lambda t} I0)
    // bounds from the proof with no fitted constant
    double explicit_ratio_v = 0.0;   // (||v||_1^2 + int ||v||_2^2) / bound
    double explicit_ratio_dv = 0.0;  // (||v'||_1^2 / Lambda + ||v||_2^2) / bound
    bool pass = false;           // fitted-C envelope within margin
    bool explicit_pass = false;  // both explicit ratios <= 1 + 1e-9
};
EnvelopeReport generic_growth_envelope(const ModeTrajectory& traj, double Lambda,
                                       double margin = 1.05);

// Lattice mode with its initial data for the periodic stability check.
struct LatticeModeData {
    int k1 = 0, k2 = 0;
    Vec u0, v0;
};

// The n smallest lattice points of (L^-1 Z)^2, ordered by (|k|^2, k1, k2), origin included.
std::vector<std::array<int, 2>> smallest_lattice_points(int n);

// Smooth random initial data: a few sine modes per component with a fixed seed.
Vec smooth_random_field(const Mesh& mesh, unsigned seed, int n_modes = 4, double amplitude = 1.0);

struct PeriodicStabilityReport {
    double K1 = 0.0, K2 = 0.0;
    double min_E0_eig = 0.0;        // worst E0 PSD certificate over modes
    double bound_v_ratio = 0.0;     // max_t (||v||_1 + ||v||_2) / (||v0||_1 + ||v0||_2 + 3 sqrt(t K1))
    double ps0_ratio = 0.0;         // (sup 1/2 ||v'||_1^2 + int ||v'||_2^2) / (2 K1)
    double ps0_strict_ratio = 0.0;  // max_t (1/2 ||v'(t)||_1^2 + int_0^t ||v'||_2^2) / K1
    double ps00_ratio = 0.0;        // sup ||v'||_2^2 / (||v'(0)||_2^2 + 2 sqrt(K1 K2))
    int modes = 0;
    bool pass = false;
};

PeriodicStabilityReport periodic_stability_check(const SteadyProfile& profile, const Mesh& mesh,
                                                 double L,
                                                 const std::vector<LatticeModeData>& data,
                                                 double T, double dt = 1e-2, int threads = 1);

}  // namespace rtg
