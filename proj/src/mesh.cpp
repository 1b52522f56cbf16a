#include "rtgrowth/mesh.hpp"

#include <algorithm>
#include <cmath>

#include "rtgrowth/errors.hpp"

namespace rtg {

Mesh Mesh::uniform(double m, double ell, int n_lower, int n_upper, int order, int quad_points) {
    if (!(m > 0.0) || !(ell > 0.0)) throw ConfigError("mesh: depths must be > 0");
    if (n_lower < 1 || n_upper < 1) throw ConfigError("mesh.elements must be >= 1");
    std::vector<double> v;
    v.reserve(n_lower + n_upper + 1);
    for (int i = 0; i < n_lower; ++i) v.push_back(-m + m * i / n_lower);
    v.push_back(0.0);
    for (int i = 1; i < n_upper; ++i) v.push_back(ell * i / n_upper);
    v.push_back(ell);
    return from_vertices(std::move(v), order, quad_points);
}

Mesh Mesh::from_vertices(std::vector<double> vertices, int order, int quad_points) {
    if (order != 1 && order != 2) throw ConfigError("mesh.order must be 1 or 2");
    if (quad_points < 1 || quad_points > 16) throw ConfigError("mesh.quad must be in 1..16");
    if (vertices.size() < 3) throw ConfigError("mesh: need elements on both sides");
    for (std::size_t i = 1; i < vertices.size(); ++i)
        if (!(vertices[i] > vertices[i - 1]))
            throw ConfigError("mesh: vertices must be strictly increasing");
    auto it = std::find(vertices.begin(), vertices.end(), 0.0);
    if (it == vertices.end() || it == vertices.begin() || it == vertices.end() - 1)
        throw ConfigError("mesh: 0 must be an interior vertex");
    Mesh mesh;
    mesh.iface_ = static_cast<int>(it - vertices.begin());
    mesh.vx_ = std::move(vertices);
    mesh.order_ = order;
    mesh.rule_ = gauss_legendre(quad_points);
    return mesh;
}

double Mesh::node_x(int node) const {
    int e = std::min(node / order_, n_elements() - 1);
    int a = node - e * order_;
    double x0 = vx_[e], x1 = vx_[e + 1];
    if (a == 0) return x0;
    if (a == order_) return x1;
    return 0.5 * (x0 + x1);
}

int Mesh::dof(int node, int comp) const {
    if (node <= 0 || node >= n_nodes() - 1) return -1;
    return 2 * (node - 1) + comp;
}

void Mesh::shape(double t, double* N, double* dN, double* d2N) const {
    if (order_ == 1) {
        N[0] = 0.5 * (1.0 - t);
        N[1] = 0.5 * (1.0 + t);
        dN[0] = -0.5;
        dN[1] = 0.5;
        if (d2N) d2N[0] = d2N[1] = 0.0;
        return;
    }
    N[0] = 0.5 * t * (t - 1.0);
    N[1] = 1.0 - t * t;
    N[2] = 0.5 * t * (t + 1.0);
    dN[0] = t - 0.5;
    dN[1] = -2.0 * t;
    dN[2] = t + 0.5;
    if (d2N) {
        d2N[0] = 1.0;
        d2N[1] = -2.0;
        d2N[2] = 1.0;
    }
}

void Mesh::unpack(const Vec& x, Vec& phi, Vec& psi) const {
    if (static_cast<int>(x.size()) != n_dofs()) throw LayoutError("dof vector size mismatch");
    phi.assign(n_nodes(), 0.0);
    psi.assign(n_nodes(), 0.0);
    for (int i = 1; i + 1 < n_nodes(); ++i) {
        phi[i] = x[dof(i, 0)];
        psi[i] = x[dof(i, 1)];
    }
}

Vec Mesh::pack(const Vec& phi, const Vec& psi) const {
    if (static_cast<int>(phi.size()) != n_nodes() || static_cast<int>(psi.size()) != n_nodes())
        throw LayoutError("nodal array size mismatch");
    Vec x(n_dofs());
    for (int i = 1; i + 1 < n_nodes(); ++i) {
        x[dof(i, 0)] = phi[i];
        x[dof(i, 1)] = psi[i];
    }
    return x;
}

FieldSample Mesh::eval_element(const Vec& x, int e, double t) const {
    double N[3], dN[3], d2N[3];
    shape(t, N, dN, d2N);
    double h = vx_[e + 1] - vx_[e];
    double j1 = 2.0 / h, j2 = j1 * j1;
    FieldSample f;
    for (int a = 0; a <= order_; ++a) {
        int node = element_node(e, a);
        int dp = dof(node, 0), dq = dof(node, 1);
        double p = dp < 0 ? 0.0 : x[dp];
        double q = dq < 0 ? 0.0 : x[dq];
        f.phi += N[a] * p;
        f.dphi += dN[a] * j1 * p;
        f.d2phi += d2N[a] * j2 * p;
        f.psi += N[a] * q;
        f.dpsi += dN[a] * j1 * q;
        f.d2psi += d2N[a] * j2 * q;
    }
    return f;
}

int Mesh::locate(double x3, Side side) const {
    if (x3 < vx_.front() || x3 > vx_.back()) throw DomainError("height outside the slab");
    if (x3 == 0.0) return side == Side::lower ? iface_ - 1 : iface_;
    auto it = std::upper_bound(vx_.begin(), vx_.end(), x3);
    int e = static_cast<int>(it - vx_.begin()) - 1;
    return std::clamp(e, 0, n_elements() - 1);
}

FieldSample Mesh::eval(const Vec& x, double x3, Side side) const {
    int e = locate(x3, side);
    double a = vx_[e], b = vx_[e + 1];
    double t = std::clamp(2.0 * (x3 - a) / (b - a) - 1.0, -1.0, 1.0);
    return eval_element(x, e, t);
}

}  // namespace rtg
