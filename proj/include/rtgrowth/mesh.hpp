#pragma once

#include <vector>

#include "rtgrowth/banded.hpp"
#include "rtgrowth/profile.hpp"
#include "rtgrowth/quadrature.hpp"

namespace rtg {

// Values of a nodal (phi, psi) field at one height.
struct FieldSample {
    double phi = 0, dphi = 0, d2phi = 0;
    double psi = 0, dpsi = 0, d2psi = 0;
};

// Lagrange finite elements of order 1 or 2 on [-m, ell] with a vertex at 0.
// Unknowns (phi, psi) are interleaved per node; the two end nodes carry the
// Dirichlet condition and have no dofs.
class Mesh {
public:
    static Mesh uniform(double m, double ell, int n_lower, int n_upper, int order = 2,
                        int quad_points = 3);
    static Mesh from_vertices(std::vector<double> vertices, int order = 2, int quad_points = 3);

    int order() const { return order_; }
    int quad_points() const { return static_cast<int>(rule_.nodes.size()); }
    const GaussRule& rule() const { return rule_; }
    int n_elements() const { return static_cast<int>(vx_.size()) - 1; }
    const std::vector<double>& vertices() const { return vx_; }
    double lower_end() const { return vx_.front(); }
    double upper_end() const { return vx_.back(); }
    int interface_vertex() const { return iface_; }
    Side element_side(int e) const { return e < iface_ ? Side::lower : Side::upper; }

    int n_nodes() const { return order_ * n_elements() + 1; }
    double node_x(int node) const;
    int element_node(int e, int a) const { return e * order_ + a; }
    int interface_node() const { return iface_ * order_; }

    int n_dofs() const { return 2 * (n_nodes() - 2); }
    int bandwidth() const { return 2 * order_ + 1; }
    // -1 for Dirichlet nodes
    int dof(int node, int comp) const;
    int psi0_dof() const { return dof(interface_node(), 1); }

    // Reference shape functions on t in [-1, 1].
    void shape(double t, double* N, double* dN, double* d2N) const;

    // Split a dof vector into full nodal arrays (zeros at the ends).
    void unpack(const Vec& x, Vec& phi, Vec& psi) const;
    Vec pack(const Vec& phi, const Vec& psi) const;
    // Interpolate a function pair at the nodes.
    template <class F, class G>
    Vec interpolate(F&& phi, G&& psi) const {
        Vec p(n_nodes()), q(n_nodes());
        for (int i = 0; i < n_nodes(); ++i) {
            double x = node_x(i);
            p[i] = phi(x);
            q[i] = psi(x);
        }
        p.front() = p.back() = q.front() = q.back() = 0.0;
        return pack(p, q);
    }

    // Evaluate inside element e at reference coordinate t.
    FieldSample eval_element(const Vec& x, int e, double t) const;
    // Evaluate at height x3 on the given side (x3 = 0 is resolved by side).
    FieldSample eval(const Vec& x, double x3, Side side) const;
    int locate(double x3, Side side) const;

private:
    std::vector<double> vx_;
    int order_ = 2;
    int iface_ = 0;
    GaussRule rule_;
};

}  // namespace rtg
