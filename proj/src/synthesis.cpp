#include "rtgrowth/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rtgrowth/errors.hpp"
#include "rtgrowth/kernels.hpp"
#include "rtgrowth/quadrature.hpp"

namespace rtg {

namespace {

constexpr double kPi = std::numbers::pi;

Side side_of(double x3) { return x3 < 0.0 ? Side::lower : Side::upper; }

struct Derivs {
    double phi, dphi, d2phi, psi, dpsi, d2psi;
};

// Nodal values and first derivatives from the mesh, second derivatives from the
// mode equations.
Derivs mode_derivs(const SteadyProfile& profile, const ModeSolution& mode, const ProfilePoint& c,
                   const FieldSample& f) {
    const double xi = mode.xi, s = mode.s_star, lam2 = -mode.mu;
    const double g = profile.geometry().g;
    const double et = s * c.eps0, det = s * c.deps0;
    const double B = c.prho + s * (c.delta0 + c.eps0 / 3.0);
    const double dB = c.dprho + s * (c.ddelta0 + c.deps0 / 3.0);
    const double A = B + et, dA = dB + det;
    Derivs d{f.phi, f.dphi, 0.0, f.psi, f.dpsi, 0.0};
    d.d2phi = (-det * f.dphi + xi * xi * A * f.phi + xi * B * f.dpsi +
               xi * (det - g * c.rho0) * f.psi + lam2 * c.rho0 * f.phi) /
              et;
    d.d2psi = (-dA * f.dpsi - xi * (dB * f.phi + B * f.dphi) + xi * (det - g * c.rho0) * f.phi +
               xi * xi * et * f.psi + lam2 * c.rho0 * f.psi) /
              A;
    return d;
}

}  // namespace

std::array<double, 3> NormalMode3D::profile(double x3, Side side) const {
    FieldSample f = mode->mesh.eval(mode->x, x3, side);
    return {f.phi * cos_a, f.phi * sin_a, f.psi};
}

NormalMode3D extend_to_plane(const ModeSolution& mode, std::array<double, 2> xi) {
    const double mag = std::hypot(xi[0], xi[1]);
    if (!(std::abs(mag - mode.xi) <= 1e-12 * std::max(1.0, mode.xi)))
        throw DomainError("extend_to_plane: |xi| does not match the mode frequency");
    NormalMode3D w;
    w.xi = xi;
    w.lambda = mode.lambda;
    w.cos_a = xi[0] / mag;
    w.sin_a = xi[1] / mag;
    w.mode = &mode;
    return w;
}

double mode_sobolev_density(const SteadyProfile& profile, const ModeSolution& mode, Field field,
                            int k) {
    if (k < 0) throw DomainError("sobolev order must be >= 0");
    if (field == Field::q ? k > 1 : k > 2)
        throw DomainError("sobolev order beyond the available x3-derivatives");
    const Mesh& mesh = mode.mesh;
    const GaussRule rule = gauss_legendre(5);
    const double xi = mode.xi, w2 = 1.0 + xi * xi;
    double acc[3] = {0, 0, 0};  // int |d3^j w|^2
    for (int e = 0; e < mesh.n_elements(); ++e) {
        const double a = mesh.vertices()[e], b = mesh.vertices()[e + 1];
        const Side side = mesh.element_side(e);
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            const double t = rule.nodes[q], x = 0.5 * (a + b) + 0.5 * (b - a) * t;
            const double wq = 0.5 * (b - a) * rule.weights[q];
            const ProfilePoint c = profile.at(side, x);
            const Derivs d = mode_derivs(profile, mode, c, mesh.eval_element(mode.x, e, t));
            if (field == Field::q) {
                const double cq = c.rho0 * (xi * d.phi + d.dpsi);
                const double dcq = c.drho0 * (xi * d.phi + d.dpsi) + c.rho0 * (xi * d.dphi + d.d2psi);
                acc[0] += wq * cq * cq;
                acc[1] += wq * dcq * dcq;
            } else {
                acc[0] += wq * (d.phi * d.phi + d.psi * d.psi);
                acc[1] += wq * (d.dphi * d.dphi + d.dpsi * d.dpsi);
                acc[2] += wq * (d.d2phi * d.d2phi + d.d2psi * d.d2psi);
            }
        }
    }
    double sum = 0.0;
    for (int j = 0; j <= k; ++j) sum += std::pow(w2, k - j) * acc[j];
    if (field == Field::v) sum *= mode.lambda * mode.lambda;
    return sum;
}

// ---- periodic

PeriodicField::PeriodicField(const SteadyProfile& profile, const DispersionCurve& lattice)
    : profile_(&profile) {
    if (!lattice.lattice) throw ConfigError("periodic synthesis needs a lattice curve");
    if (lattice.certificate || lattice.points.empty())
        throw ConfigError(
            "periodic synthesis: L is in the stable range (certificate: no growing lattice "
            "modes)");
    L_ = lattice.L;
    bool found = false;
    for (const auto& s : lattice.samples)
        if (s.xi == lattice.argmax && is_unstable(s.outcome)) {
            mode_ = mode_of(s.outcome);
            found = true;
        }
    if (!found) throw SolverError("periodic synthesis: maximizing lattice mode missing");
    for (const auto& p : lattice.points)
        if (p.xi == lattice.argmax && (p.k1 > 0 || (p.k1 == 0 && p.k2 > 0))) {
            k_ = {p.k1, p.k2};
            break;
        }
    lambda_ = mode_.lambda;
    w_ = extend_to_plane(mode_, {k_[0] / L_, k_[1] / L_});
    w_.mode = &mode_;
}

FieldValue PeriodicField::eval(const Point3& x, double t) const {
    const Side side = side_of(x.x3);
    const FieldSample f = mode_.mesh.eval(mode_.x, x.x3, side);
    const double rho0 = profile_->rho0(side, x.x3);
    const double growth = std::exp(lambda_ * t);
    using C = std::complex<double>;
    C eta[3] = {0, 0, 0}, q = 0;
    // the pair xi, -xi; rotating by pi flips the sign of (phi, theta)
    for (int j = 0; j < 2; ++j) {
        const double sg = j == 0 ? 1.0 : -1.0;
        const double c = sg * w_.cos_a, s = sg * w_.sin_a;
        const double th = sg * (x.x1 * w_.xi[0] + x.x2 * w_.xi[1]);
        const C e(std::cos(th), std::sin(th));
        const C I(0.0, 1.0);
        eta[0] += -I * (f.phi * c) * e;
        eta[1] += -I * (f.phi * s) * e;
        eta[2] += f.psi * e;
        q += -rho0 * (mode_.xi * f.phi + f.dpsi) * e;
    }
    FieldValue out;
    for (int i = 0; i < 3; ++i) {
        out.eta[i] = growth * eta[i].real();
        out.v[i] = lambda_ * out.eta[i];
        out.imag = std::max(out.imag, growth * std::abs(eta[i].imag()));
    }
    out.q = growth * q.real();
    out.imag = std::max(out.imag, growth * std::abs(q.imag()));
    return out;
}

double PeriodicField::sobolev_norm(Field field, int k, double t) const {
    const double W = 4.0 * kPi * kPi * L_ * L_;
    const double dens = mode_sobolev_density(*profile_, mode_, field, k);
    return std::sqrt(2.0 * W * dens) * std::exp(lambda_ * t);
}

double periodic_direct_l2(const PeriodicField& field, Field which, double t, int n) {
    if (n < 1) throw DomainError("periodic_direct_l2: n must be >= 1");
    const Mesh& mesh = field.mode().mesh;
    const GaussRule rule = gauss_legendre(5);
    const double P = 2.0 * kPi * field.L(), h = P / n;
    double sum = 0.0;
    for (int e = 0; e < mesh.n_elements(); ++e) {
        const double a = mesh.vertices()[e], b = mesh.vertices()[e + 1];
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            const double x3 = 0.5 * (a + b) + 0.5 * (b - a) * rule.nodes[q];
            const double wq = 0.5 * (b - a) * rule.weights[q] * h * h;
            double layer = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    FieldValue v = field.eval({i * h, j * h, x3}, t);
                    if (which == Field::q) layer += v.q * v.q;
                    else {
                        const auto& u = which == Field::eta ? v.eta : v.v;
                        layer += u[0] * u[0] + u[1] * u[1] + u[2] * u[2];
                    }
                }
            sum += wq * layer;
        }
    }
    return std::sqrt(sum);
}

// ---- non-periodic

double BumpSpec::operator()(double r) const {
    if (!(r > a && r < b)) return 0.0;
    const double u = (2.0 * r - a - b) / (b - a);
    return amp * std::exp(-1.0 / (1.0 - u * u));
}

BumpSpec default_bump(const SteadyProfile& profile) {
    const double xc = profile.xi_c();
    if (!std::isfinite(xc)) throw ConfigError("default bump needs sigma > 0; set synthesis.f.a/b");
    return {0.3 * xc, 0.7 * xc, 1.0};
}

NonperiodicField::NonperiodicField(const SteadyProfile& profile, const Mesh& mesh,
                                   const BumpSpec& f, const SynthesisOptions& opt)
    : profile_(&profile), f_(f) {
    if (!(f.a > 0.0 && f.b > f.a && f.b < profile.xi_c()))
        throw ConfigError("synthesis.f: support [a, b] must lie in (0, xi_c)");
    if (opt.radial < 1) throw ConfigError("synthesis.radial must be >= 1");
    if (opt.angular < 2 || opt.angular % 2) throw ConfigError("synthesis.angular must be even");
    const GaussRule g = gauss_legendre(opt.radial);
    const int nr = opt.radial;
    for (int i = 0; i < nr; ++i) {
        r_.push_back(0.5 * (f.a + f.b) + 0.5 * (f.b - f.a) * g.nodes[i]);
        wr_.push_back(0.5 * (f.b - f.a) * g.weights[i]);
        fr_.push_back(f(r_.back()));
    }
    // radial nodes plus both support ends for lambda_0
    std::vector<double> xs = r_;
    xs.push_back(f.a);
    xs.push_back(f.b);
    std::vector<GrowthOutcome> out(xs.size());
    parallel_for(static_cast<int>(xs.size()), opt.threads,
                 [&](int i) { out[i] = growth_rate(profile, mesh, xs[i], opt.growth); });
    lambda0_ = INFINITY;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!is_unstable(out[i]))
            throw SolverError("synthesis: no growing mode inside supp(f); refine the mesh");
        lambda0_ = std::min(lambda0_, mode_of(out[i]).lambda);
        if (i < r_.size()) {
            modes_.push_back(mode_of(out[i]));
            lambda_max_ = std::max(lambda_max_, modes_.back().lambda);
        }
    }
    const int na = opt.angular, half = na / 2;
    dalpha_ = 2.0 * kPi / na;
    ca_.resize(na);
    sa_.resize(na);
    for (int j = 0; j < half; ++j) {
        ca_[j] = std::cos(j * dalpha_);
        sa_[j] = std::sin(j * dalpha_);
        ca_[j + half] = -ca_[j];
        sa_[j + half] = -sa_[j];
    }
}

FieldValue NonperiodicField::eval(const Point3& x, double t) const {
    const Side side = side_of(x.x3);
    const double rho0 = profile_->rho0(side, x.x3);
    const auto& K = kernels::active();
    const int na = static_cast<int>(ca_.size());
    double re[7] = {0, 0, 0, 0, 0, 0, 0}, im[7] = {0, 0, 0, 0, 0, 0, 0};
    for (std::size_t i = 0; i < r_.size(); ++i) {
        const ModeSolution& m = modes_[i];
        const FieldSample f = m.mesh.eval(m.x, x.x3, side);
        const double fac =
            wr_[i] * r_[i] * fr_[i] * std::exp(m.lambda * t) * dalpha_ / (4.0 * kPi * kPi);
        double s[6];
        K.plane_wave_sums(na, ca_.data(), sa_.data(), r_[i], x.x1, x.x2, s);
        const double p = fac * f.phi, w = fac * f.psi;
        const double qc = -fac * rho0 * (r_[i] * f.phi + f.dpsi);
        // (-i phi cos a) e^{it}, (-i phi sin a) e^{it}, psi e^{it}
        const double r3[3] = {p * s[3], p * s[5], w * s[0]};
        const double i3[3] = {-p * s[2], -p * s[4], w * s[1]};
        for (int c = 0; c < 3; ++c) {
            re[c] += r3[c];
            im[c] += i3[c];
            re[c + 3] += m.lambda * r3[c];
            im[c + 3] += m.lambda * i3[c];
        }
        re[6] += qc * s[0];
        im[6] += qc * s[1];
    }
    FieldValue out;
    for (int c = 0; c < 3; ++c) {
        out.eta[c] = re[c];
        out.v[c] = re[c + 3];
    }
    out.q = re[6];
    for (double v : im) out.imag = std::max(out.imag, std::abs(v));
    return out;
}

FieldValue NonperiodicField::eval_bessel(const Point3& x, double t) const {
    const Side side = side_of(x.x3);
    const double rho0 = profile_->rho0(side, x.x3);
    const double rho = std::hypot(x.x1, x.x2);
    const double cb = rho > 0.0 ? x.x1 / rho : 1.0, sb = rho > 0.0 ? x.x2 / rho : 0.0;
    FieldValue out;
    for (std::size_t i = 0; i < r_.size(); ++i) {
        const ModeSolution& m = modes_[i];
        const FieldSample f = m.mesh.eval(m.x, x.x3, side);
        const double fac = wr_[i] * r_[i] * fr_[i] * std::exp(m.lambda * t) / (2.0 * kPi);
        const double j0 = std::cyl_bessel_j(0.0, r_[i] * rho);
        const double j1 = std::cyl_bessel_j(1.0, r_[i] * rho);
        const double e[3] = {fac * f.phi * j1 * cb, fac * f.phi * j1 * sb, fac * f.psi * j0};
        for (int c = 0; c < 3; ++c) {
            out.eta[c] += e[c];
            out.v[c] += m.lambda * e[c];
        }
        out.q += -fac * rho0 * (r_[i] * f.phi + f.dpsi) * j0;
    }
    return out;
}

double NonperiodicField::sobolev_norm(Field field, int k, double t) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < r_.size(); ++i) {
        const double W = wr_[i] * r_[i] * 2.0 * kPi / (4.0 * kPi * kPi);
        sum += W * fr_[i] * fr_[i] * std::exp(2.0 * modes_[i].lambda * t) *
               mode_sobolev_density(*profile_, modes_[i], field, k);
    }
    return std::sqrt(sum);
}

double NonperiodicField::bump_weight(int k) const {
    auto integrand = [&](double r) {
        const double fv = f_(r);
        return 2.0 * kPi * r * std::pow(1.0 + r * r, k + 1) * fv * fv;
    };
    return std::sqrt(integrate_adaptive(integrand, f_.a, f_.b, 1e-10));
}

std::vector<Point3> Grid3::points() const {
    for (int c = 0; c < 3; ++c)
        if (n[c] < 1) throw ConfigError("grid: counts must be >= 1");
    auto coord = [](const std::array<double, 2>& r, int n, int i) {
        return n == 1 ? r[0] : r[0] + (r[1] - r[0]) * i / (n - 1);
    };
    std::vector<Point3> pts;
    pts.reserve(static_cast<std::size_t>(n[0]) * n[1] * n[2]);
    for (int k = 0; k < n[2]; ++k)
        for (int j = 0; j < n[1]; ++j)
            for (int i = 0; i < n[0]; ++i)
                pts.push_back({coord(x1, n[0], i), coord(x2, n[1], j), coord(x3, n[2], k)});
    return pts;
}

}  // namespace rtg
