#pragma once

#include "rtgrowth/banded.hpp"
#include "rtgrowth/mesh.hpp"
#include "rtgrowth/profile.hpp"

namespace rtg {

// Quadratic forms at one frequency magnitude: x^T E0 x, x^T E1 x and x^T J x
// are the values of the energies (the 1/2 factors are inside the matrices).
struct FormSet {
    double xi = 0.0;
    Mesh mesh;
    SymBand E0, E1, J;
    // 1/2 int P'(rho0) rho0 (psi' + xi phi - g psi / P')^2, no interface term.
    SymBand pressure_square;
    double g = 1.0;
    double jump = 0.0;   // [[rho0]]
    double sigma = 0.0;

    int n() const { return J.n(); }
    int psi0_dof() const { return mesh.psi0_dof(); }
};

// xi_mag > 0.
FormSet assemble(const SteadyProfile& profile, const Mesh& mesh, double xi_mag);
// Same forms but xi_mag = 0 is accepted (horizontal mean mode of a lattice).
FormSet assemble_lattice_mode(const SteadyProfile& profile, const Mesh& mesh, double xi_mag);

// E0 through the completed square: pressure_square + (sigma xi^2 - g [[rho0]]) / 2 psi(0)^2.
SymBand completed_square_E0(const FormSet& forms);

// x^T (E0 + s E1) x
double form_value(const FormSet& forms, const Vec& x, double s);

}  // namespace rtg
