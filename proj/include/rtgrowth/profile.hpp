#pragma once

#include <optional>

#include "rtgrowth/eos.hpp"

namespace rtg {

enum class Side { lower, upper };

struct SlabGeometry {
    double m = 1.0;      // lower depth
    double ell = 1.0;    // upper depth
    double g = 1.0;
    double sigma = 0.0;  // surface tension
    std::optional<double> L;  // horizontal period 2 pi L

    void validate() const;
};

// eps(rho) = eps_c rho^eps_p, delta(rho) = delta_c rho^delta_p.
struct ViscosityLaw {
    double eps_c = 0.1, eps_p = 0.0;
    double delta_c = 0.0, delta_p = 0.0;

    static ViscosityLaw constant(double eps, double delta = 0.0) { return {eps, 0.0, delta, 0.0}; }

    double eps(double rho) const;
    double deps(double rho) const;
    double delta(double rho) const;
    double ddelta(double rho) const;
    void validate() const;
};

// Coefficients of the linearized problem at one height.
struct ProfilePoint {
    double rho0, drho0;
    double prho;   // P'(rho0) rho0
    double dprho;  // d/dx3 of prho
    double pprime; // P'(rho0)
    double eps0, deps0;
    double delta0, ddelta0;
};

class SteadyProfile {
public:
    SteadyProfile(PressureLaw lower, PressureLaw upper, double rho0_minus, SlabGeometry geometry,
                  ViscosityLaw visc_lower, ViscosityLaw visc_upper);

    const SlabGeometry& geometry() const { return geo_; }
    const PressureLaw& law(Side s) const { return s == Side::lower ? lower_ : upper_; }
    const ViscosityLaw& viscosity(Side s) const { return s == Side::lower ? vl_ : vu_; }
    double rho_minus() const { return rho_m_; }
    double rho_plus() const { return rho_p_; }
    double jump() const { return rho_p_ - rho_m_; }
    double xi_c() const;  // +inf when sigma = 0

    // x3 = 0 is evaluated on the given side.
    double rho0(Side s, double x3) const;
    double rho0(double x3) const { return rho0(x3 < 0.0 ? Side::lower : Side::upper, x3); }
    ProfilePoint at(Side s, double x3) const;

private:
    PressureLaw lower_, upper_;
    double rho_m_, rho_p_;
    double h_m_, h_p_;
    SlabGeometry geo_;
    ViscosityLaw vl_, vu_;
};

SteadyProfile build_profile(const PressureLaw& lower, const PressureLaw& upper, double rho0_minus,
                            const SlabGeometry& geometry, const ViscosityLaw& visc_lower,
                            const ViscosityLaw& visc_upper);

// max over n_check interior points per side of |d/dx3 P(rho0) + g rho0|,
// centered differences with step h_fd.
double verify_hydrostatic(const SteadyProfile& profile, int n_check, double h_fd = 1e-4);

}  // namespace rtg
