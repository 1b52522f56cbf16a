#include "rtgrowth/forms.hpp"

#include <cmath>

#include "rtgrowth/errors.hpp"

namespace rtg {

namespace {

constexpr int kMaxLocal = 6;

void add_outer(SymBand& M, const int* gdof, const double* u, const double* v, double w, int nl) {
    // M += w/2 (u v^T + v u^T), restricted to free dofs
    for (int i = 0; i < nl; ++i) {
        if (gdof[i] < 0) continue;
        for (int j = 0; j < nl; ++j) {
            if (gdof[j] < 0 || gdof[j] > gdof[i]) continue;
            double val = 0.5 * w * (u[i] * v[j] + v[i] * u[j]);
            if (val != 0.0) M.add(gdof[i], gdof[j], val);
        }
    }
}

FormSet assemble_impl(const SteadyProfile& profile, const Mesh& mesh, double xi) {
    const int n = mesh.n_dofs();
    const int kd = mesh.bandwidth();
    const double g = profile.geometry().g;
    FormSet f;
    f.xi = xi;
    f.mesh = mesh;
    f.E0 = SymBand(n, kd);
    f.E1 = SymBand(n, kd);
    f.J = SymBand(n, kd);
    f.pressure_square = SymBand(n, kd);
    f.g = g;
    f.jump = profile.jump();
    f.sigma = profile.geometry().sigma;

    const int p = mesh.order();
    const int nl = 2 * (p + 1);
    const GaussRule& rule = mesh.rule();
    double N[3], dN[3];
    int gdof[kMaxLocal];
    double rphi[kMaxLocal], rpsi[kMaxLocal], d1[kMaxLocal], d2[kMaxLocal], d3[kMaxLocal],
        cs[kMaxLocal];

    for (int e = 0; e < mesh.n_elements(); ++e) {
        const double a = mesh.vertices()[e], b = mesh.vertices()[e + 1];
        const double h = b - a;
        const Side side = mesh.element_side(e);
        for (int k = 0; k <= p; ++k) {
            int node = mesh.element_node(e, k);
            gdof[2 * k] = mesh.dof(node, 0);
            gdof[2 * k + 1] = mesh.dof(node, 1);
        }
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            const double t = rule.nodes[q];
            const double x = a + 0.5 * h * (t + 1.0);
            const double w = 0.5 * h * rule.weights[q];
            const ProfilePoint c = profile.at(side, x);
            mesh.shape(t, N, dN, nullptr);
            for (int k = 0; k <= p; ++k) {
                double Nk = N[k], dk = dN[k] * 2.0 / h;
                rphi[2 * k] = Nk, rphi[2 * k + 1] = 0.0;
                rpsi[2 * k] = 0.0, rpsi[2 * k + 1] = Nk;
                d1[2 * k] = xi * Nk, d1[2 * k + 1] = dk;   // psi' + xi phi
                d2[2 * k] = dk, d2[2 * k + 1] = -xi * Nk;  // phi' - xi psi
                d3[2 * k] = -xi * Nk, d3[2 * k + 1] = dk;  // psi' - xi phi
                cs[2 * k] = d1[2 * k];
                cs[2 * k + 1] = d1[2 * k + 1] - g / c.pprime * Nk;
            }
            const double wh = 0.5 * w;
            add_outer(f.E0, gdof, d1, d1, wh * c.prho, nl);
            add_outer(f.E0, gdof, rphi, rpsi, -w * g * c.rho0 * xi, nl);
            add_outer(f.E1, gdof, d1, d1, wh * (c.delta0 + c.eps0 / 3.0), nl);
            add_outer(f.E1, gdof, d2, d2, wh * c.eps0, nl);
            add_outer(f.E1, gdof, d3, d3, wh * c.eps0, nl);
            add_outer(f.J, gdof, rphi, rphi, wh * c.rho0, nl);
            add_outer(f.J, gdof, rpsi, rpsi, wh * c.rho0, nl);
            add_outer(f.pressure_square, gdof, cs, cs, wh * c.prho, nl);
        }
    }
    const int i0 = mesh.psi0_dof();
    f.E0.add(i0, i0, 0.5 * f.sigma * xi * xi);
    return f;
}

}  // namespace

FormSet assemble(const SteadyProfile& profile, const Mesh& mesh, double xi_mag) {
    if (!(xi_mag > 0.0) || !std::isfinite(xi_mag)) throw DomainError("assemble: xi_mag must be > 0");
    return assemble_impl(profile, mesh, xi_mag);
}

FormSet assemble_lattice_mode(const SteadyProfile& profile, const Mesh& mesh, double xi_mag) {
    if (!(xi_mag >= 0.0) || !std::isfinite(xi_mag))
        throw DomainError("assemble: xi_mag must be >= 0");
    return assemble_impl(profile, mesh, xi_mag);
}

SymBand completed_square_E0(const FormSet& forms) {
    SymBand E = forms.pressure_square;
    const int i0 = forms.psi0_dof();
    E.add(i0, i0, 0.5 * (forms.sigma * forms.xi * forms.xi - forms.g * forms.jump));
    return E;
}

double form_value(const FormSet& forms, const Vec& x, double s) {
    if (static_cast<int>(x.size()) != forms.n()) throw LayoutError("form_value: size mismatch");
    if (!(s >= 0.0)) throw DomainError("form_value: s must be >= 0");
    return forms.E0.quad(x) + s * forms.E1.quad(x);
}

}  // namespace rtg
