#include "rtgrowth/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "rtgrowth/errors.hpp"

namespace rtg {

namespace {

struct Eval {
    double s, mu, F;
    EigenResult eig;
};

}  // namespace

GrowthOutcome growth_rate(const SteadyProfile& profile, const Mesh& mesh, double xi_mag,
                          const GrowthOptions& opt) {
    if (!(xi_mag > 0.0) || !std::isfinite(xi_mag)) throw DomainError("growth_rate: xi must be > 0");
    const double sigma = profile.geometry().sigma;
    const double g = profile.geometry().g;
    if (sigma > 0.0 && xi_mag >= profile.xi_c())
        return Stable{xi_mag, "surface tension stabilizes |xi| >= xi_c", false};

    FormSet forms = assemble(profile, mesh, xi_mag);
    std::optional<double> hint;
    auto eval = [&](double s) {
        EigenOptions eo = opt.eig;
        eo.hint = hint;
        EigenResult r = smallest_eig(forms, s, eo);
        hint = r.mu;
        double F = s - std::sqrt(std::max(-r.mu, 0.0));
        return Eval{s, r.mu, F, std::move(r)};
    };

    Eval lo = eval(opt.s_lo);
    if (lo.mu >= 0.0) {
        // Both sigma = 0 and 0 < |xi| < xi_c are guaranteed unstable.
        return Stable{xi_mag, "mu(s_lo) >= 0: no growing mode resolved; refine the mesh", true};
    }
    Eval hi = eval(std::max(2.0 * opt.s_lo, std::sqrt(g * xi_mag)));
    int doublings = 0;
    while (!(hi.mu >= 0.0 || hi.F > 0.0)) {
        if (++doublings > opt.max_doublings)
            throw SolverError("growth_rate: fixed-point bracket not found after 60 doublings");
        lo = std::move(hi);
        hi = eval(2.0 * lo.s);
    }
    if (std::abs(lo.F) <= opt.fp_tol && lo.F <= 0.0 && lo.mu < 0.0) hi = lo;

    Eval best = std::abs(lo.F) < std::abs(hi.F) ? lo : hi;
    for (int it = 0; it < 200 && std::abs(best.F) > opt.fp_tol; ++it) {
        double mid = 0.5 * (lo.s + hi.s);
        if (mid <= lo.s || mid >= hi.s) break;
        hint = lo.mu;
        Eval m = eval(mid);
        if (std::abs(m.F) < std::abs(best.F)) best = m;
        if (m.F > 0.0)
            hi = std::move(m);
        else
            lo = std::move(m);
    }
    if (!(std::abs(best.F) <= opt.fp_tol)) {
        std::ostringstream os;
        os << "growth_rate: fixed point residual " << best.F << " above tolerance at |xi|="
           << xi_mag;
        throw SolverError(os.str());
    }
    if (best.mu >= 0.0) return Stable{xi_mag, "fixed point at mu >= 0", true};

    ModeSolution mode;
    mode.xi = xi_mag;
    mode.s_star = best.s;
    mode.lambda = best.s;
    mode.mu = best.mu;
    mode.mesh = mesh;
    mode.x = std::move(best.eig.minimizer);
    polish_eigenvector(forms.E0.axpy(best.s, forms.E1), forms.J, best.mu, mode.x);
    if (mode.x[mesh.psi0_dof()] < 0.0)
        for (double& v : mode.x) v = -v;
    mode.diag = mode_diagnostics(profile, mode);
    mode.diag.fixed_point_residual = std::abs(best.F);
    mode.diag.eig_residual = best.eig.residual;
    return mode;
}

ModeDiagnostics mode_diagnostics(const SteadyProfile& profile, const ModeSolution& mode) {
    const Mesh& mesh = mode.mesh;
    const double xi = mode.xi, s = mode.s_star;
    const double lam2 = -mode.mu;
    const double g = profile.geometry().g;
    ModeDiagnostics d;

    for (int e = 0; e < mesh.n_elements(); ++e) {
        const Side side = mesh.element_side(e);
        const double a = mesh.vertices()[e], b = mesh.vertices()[e + 1];
        const double x = 0.5 * (a + b);
        const ProfilePoint c = profile.at(side, x);
        const FieldSample f = mesh.eval_element(mode.x, e, 0.0);
        const double et = s * c.eps0, det = s * c.deps0;
        const double B = c.prho + s * (c.delta0 + c.eps0 / 3.0);
        const double dB = c.dprho + s * (c.ddelta0 + c.deps0 / 3.0);
        const double A = B + et, dA = dB + det;
        double r1 = -et * f.d2phi - det * f.dphi + xi * xi * A * f.phi + xi * B * f.dpsi +
                    xi * (det - g * c.rho0) * f.psi + lam2 * c.rho0 * f.phi;
        double r2 = -A * f.d2psi - dA * f.dpsi - xi * (dB * f.phi + B * f.dphi) +
                    xi * (det - g * c.rho0) * f.phi + xi * xi * et * f.psi + lam2 * c.rho0 * f.psi;
        d.ode_residual = std::max({d.ode_residual, std::abs(r1), std::abs(r2)});
    }

    const FieldSample m = mesh.eval(mode.x, 0.0, Side::lower);
    const FieldSample p = mesh.eval(mode.x, 0.0, Side::upper);
    const ProfilePoint cm = profile.at(Side::lower, 0.0), cp = profile.at(Side::upper, 0.0);
    auto Bof = [&](const ProfilePoint& c) { return c.prho + s * (c.delta0 + c.eps0 / 3.0); };
    d.jump_phi = std::abs(p.phi - m.phi);
    d.jump_psi = std::abs(p.psi - m.psi);
    d.jump_tangential =
        std::abs(s * cp.eps0 * (p.dphi - xi * p.psi) - s * cm.eps0 * (m.dphi - xi * m.psi));
    const double psi0 = mode.x[mesh.psi0_dof()];
    d.jump_normal = std::abs(Bof(cp) * (p.dpsi + xi * p.phi) - Bof(cm) * (m.dpsi + xi * m.phi) +
                             s * cp.eps0 * (p.dpsi - xi * p.phi) -
                             s * cm.eps0 * (m.dpsi - xi * m.phi) -
                             profile.geometry().sigma * xi * xi * psi0);
    d.psi0 = psi0;
    return d;
}

namespace {

void refine_max(const SteadyProfile& profile, const Mesh& mesh, const GrowthOptions& opt,
                DispersionCurve& c) {
    const auto& S = c.samples;
    std::size_t im = 0;
    for (std::size_t i = 0; i < S.size(); ++i)
        if (S[i].lambda() > S[im].lambda()) im = i;
    c.sample_max = S[im].lambda();
    c.Lambda = c.sample_max;
    c.argmax = S[im].xi;
    if (im == 0 || im + 1 >= S.size() || c.sample_max <= 0.0) return;
    double x0 = std::log(S[im - 1].xi), x1 = std::log(S[im].xi), x2 = std::log(S[im + 1].xi);
    double y0 = S[im - 1].lambda(), y1 = S[im].lambda(), y2 = S[im + 1].lambda();
    // vertex of the interpolating parabola
    double d01 = (y1 - y0) / (x1 - x0), d12 = (y2 - y1) / (x2 - x1);
    double a2 = (d12 - d01) / (x2 - x0);
    if (!(a2 < 0.0)) return;
    double xv = 0.5 * (x0 + x1) - d01 / (2.0 * a2);
    xv = std::clamp(xv, x0, x2);
    double yv = y0 + d01 * (xv - x0) + a2 * (xv - x0) * (xv - x1);
    double xi_v = std::exp(xv);
    GrowthOutcome o = growth_rate(profile, mesh, xi_v, opt);
    if (!is_unstable(o)) return;
    double lv = mode_of(o).lambda;
    c.refined = true;
    c.fit_tolerance = std::abs(lv - yv);
    if (lv > c.Lambda) {
        c.Lambda = lv;
        c.argmax = xi_v;
    }
}

}  // namespace

DispersionCurve sweep(const SteadyProfile& profile, const Mesh& mesh, double xi_min, double xi_max,
                      int n, const GrowthOptions& opt, int threads) {
    if (n < 1) throw ConfigError("sweep.n must be >= 1");
    if (!(xi_min > 0.0) || !(xi_max >= xi_min) || (n > 1 && !(xi_max > xi_min)))
        throw ConfigError("sweep: need 0 < xi_min < xi_max");
    if (profile.geometry().sigma > 0.0 && xi_max > profile.xi_c())
        throw ConfigError("sweep: xi_max exceeds the critical frequency");
    DispersionCurve c;
    c.samples.resize(n);
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i)
        xs[i] = n == 1 ? xi_min
                       : std::exp(std::log(xi_min) +
                                  (std::log(xi_max) - std::log(xi_min)) * i / (n - 1.0));
    parallel_for(n, threads, [&](int i) {
        c.samples[i] = DispersionSample{xs[i], growth_rate(profile, mesh, xs[i], opt)};
    });
    refine_max(profile, mesh, opt, c);
    return c;
}

DispersionCurve lattice_modes(const SteadyProfile& profile, const Mesh& mesh, double L,
                              std::optional<double> xi_cap, const GrowthOptions& opt,
                              int threads) {
    if (!(L > 0.0)) throw ConfigError("lattice: L must be > 0");
    const double sigma = profile.geometry().sigma;
    DispersionCurve c;
    c.lattice = true;
    c.L = L;
    double bound;  // |k|^2 must stay strictly below this
    if (sigma > 0.0) {
        double Lc = std::sqrt(sigma / (profile.geometry().g * profile.jump()));
        if (L <= Lc * (1.0 + 1e-12)) {
            c.certificate = true;
            return c;
        }
        double t = profile.xi_c() * L;
        bound = t * t * (1.0 - 1e-12);
        if (xi_cap) bound = std::min(bound, (*xi_cap * L) * (*xi_cap * L) * (1.0 + 1e-12));
    } else {
        if (!xi_cap) throw ConfigError("lattice: sigma = 0 needs lattice.xi_max");
        bound = (*xi_cap * L) * (*xi_cap * L) * (1.0 + 1e-12);
    }
    const int kmax = static_cast<int>(std::floor(std::sqrt(bound))) + 1;
    std::map<long, std::vector<std::pair<int, int>>> groups;
    for (int k1 = -kmax; k1 <= kmax; ++k1)
        for (int k2 = -kmax; k2 <= kmax; ++k2) {
            long q = static_cast<long>(k1) * k1 + static_cast<long>(k2) * k2;
            if (q == 0 || static_cast<double>(q) >= bound) continue;
            groups[q].push_back({k1, k2});
        }
    std::vector<long> mags;
    for (auto& kv : groups) mags.push_back(kv.first);
    c.samples.resize(mags.size());
    parallel_for(static_cast<int>(mags.size()), threads, [&](int i) {
        double xi = std::sqrt(static_cast<double>(mags[i])) / L;
        c.samples[i] = DispersionSample{xi, growth_rate(profile, mesh, xi, opt)};
    });
    for (std::size_t i = 0; i < mags.size(); ++i) {
        const auto& s = c.samples[i];
        if (!is_unstable(s.outcome)) continue;
        for (auto [k1, k2] : groups[mags[i]]) c.points.push_back({k1, k2, s.xi, s.lambda()});
        if (s.lambda() > c.Lambda_L) {
            c.Lambda_L = s.lambda();
            c.argmax = s.xi;
        }
    }
    c.Lambda = c.Lambda_L;
    c.sample_max = c.Lambda_L;
    c.certificate = c.points.empty();
    return c;
}

}  // namespace rtg
