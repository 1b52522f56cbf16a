#include "rtgrowth/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "rtgrowth/errors.hpp"
#include "rtgrowth/kernels.hpp"

namespace rtg {

MidpointStepper::MidpointStepper(const SymBand& J, const SymBand& E1, const SymBand& E0, double dt)
    : E0_(&E0), dt_(dt) {
    if (!(dt != 0.0) || !std::isfinite(dt)) throw DomainError("time step must be nonzero");
    SymBand S = J.axpy(0.5 * dt, E1).axpy(0.25 * dt * dt, E0);
    M_ = J.axpy(-0.5 * dt, E1).axpy(-0.25 * dt * dt, E0);
    lu_ = std::make_unique<BandLU>(S);
    if (!lu_->ok()) throw SolverError("internal: singular midpoint step matrix");
}

void MidpointStepper::step(Vec& u, Vec& w, Vec* w_mid) const {
    const int n = static_cast<int>(u.size());
    Vec rhs(n), Eu(n);
    M_.apply(w.data(), rhs.data());
    E0_->apply(u.data(), Eu.data());
    for (int i = 0; i < n; ++i) rhs[i] -= dt_ * Eu[i];
    lu_->solve_inplace(rhs.data());
    if (w_mid) w_mid->resize(n);
    for (int i = 0; i < n; ++i) {
        double wm = 0.5 * (w[i] + rhs[i]);
        u[i] += dt_ * wm;
        if (w_mid) (*w_mid)[i] = wm;
        w[i] = rhs[i];
    }
}

double default_dt(double lambda) {
    if (!(lambda > 0.0)) return 1e-3;
    return std::min(1e-3, 1e-3 / lambda);
}

namespace {

LedgerRow ledger_row(const FormSet& f, double t, const Vec& u, const Vec& w) {
    LedgerRow r;
    r.t = t;
    double wJw = f.J.quad(w), wE1w = f.E1.quad(w);
    r.kinetic = 0.5 * wJw;
    r.potential = 0.5 * f.E0.quad(u);
    r.norm1 = std::sqrt(std::max(0.0, 2.0 * f.J.quad(u)));
    r.norm2 = std::sqrt(std::max(0.0, 2.0 * f.E1.quad(u)));
    r.dnorm1 = std::sqrt(std::max(0.0, 2.0 * wJw));
    r.dnorm2 = std::sqrt(std::max(0.0, 2.0 * wE1w));
    return r;
}

}  // namespace

ModeTrajectory integrate(std::shared_ptr<const FormSet> forms, const Vec& u0, const Vec& v0,
                         double dt, double T, const IntegrateOptions& opt) {
    if (!forms) throw DomainError("integrate: no forms");
    const FormSet& f = *forms;
    const int n = f.n();
    if (static_cast<int>(u0.size()) != n || static_cast<int>(v0.size()) != n)
        throw LayoutError("integrate: initial data size mismatch");
    if (!(dt > 0.0) || !(T >= dt)) throw DomainError("integrate: need dt > 0 and T >= dt");
    if (opt.eta0 && static_cast<int>(opt.eta0->size()) != n)
        throw LayoutError("integrate: eta0 size mismatch");

    const long steps = std::lround(T / dt);
    const long stride = opt.store_stride > 0 ? opt.store_stride : std::max(1L, steps / 100);

    ModeTrajectory tr;
    tr.forms = forms;
    tr.dt = dt;
    tr.ledger.reserve(steps + 1);

    MidpointStepper stepper(f.J, f.E1, f.E0, dt);
    Vec u = u0, w = v0, wm;
    Vec eta = opt.eta0 ? *opt.eta0 : Vec{};
    auto store = [&](double t) {
        tr.state_times.push_back(t);
        tr.u.push_back(u);
        tr.w.push_back(w);
        if (opt.eta0) tr.eta.push_back(eta);
    };
    LedgerRow row = ledger_row(f, 0.0, u, w);
    double diss_prev = f.E1.quad(w);
    tr.ledger.push_back(row);
    store(0.0);
    double Dtrap = 0.0, Dmid = 0.0;
    for (long k = 1; k <= steps; ++k) {
        Vec u_old = opt.eta0 ? u : Vec{};
        stepper.step(u, w, &wm);
        if (opt.eta0)
            for (int i = 0; i < n; ++i) eta[i] += 0.5 * dt * (u_old[i] + u[i]);
        double diss = f.E1.quad(w);
        Dtrap += 0.5 * dt * (diss_prev + diss);
        Dmid += dt * f.E1.quad(wm);
        diss_prev = diss;
        row = ledger_row(f, k * dt, u, w);
        row.dissipated_cum = Dtrap;
        row.dissipated_mid = Dmid;
        tr.ledger.push_back(row);
        if (k % stride == 0 || k == steps) store(k * dt);
        for (double v : u)
            if (!std::isfinite(v)) throw SolverError("integrate: non-finite state");
    }
    return tr;
}

double energy_identity_check(const ModeTrajectory& traj) {
    if (traj.ledger.empty()) return 0.0;
    const LedgerRow& r0 = traj.ledger.front();
    const double E0 = r0.kinetic + r0.potential;
    double worst = 0.0, scale = 0.0;
    for (const auto& r : traj.ledger) {
        worst = std::max(worst, std::abs(r.kinetic + r.potential - E0 + r.dissipated_cum));
        scale = std::max(scale, r.kinetic + std::abs(r.potential) + r.dissipated_cum);
    }
    return scale > 0.0 ? worst / scale : 0.0;
}

GrowthBoundReport growth_bound_check(const FormSet& forms, double Lambda, double tol) {
    if (!(Lambda >= 0.0)) throw DomainError("growth_bound_check: Lambda must be >= 0");
    EigenResult r = smallest_eig(forms, Lambda);
    GrowthBoundReport rep;
    rep.min_eig = r.mu + Lambda * Lambda;
    rep.pass = rep.min_eig >= -tol;
    return rep;
}

EnvelopeReport generic_growth_envelope(const ModeTrajectory& traj, double Lambda, double margin) {
    if (!(Lambda > 0.0)) throw DomainError("generic_growth_envelope: Lambda must be > 0");
    const FormSet& f = *traj.forms;
    const Vec& u0 = traj.u.front();
    const Vec& w0 = traj.w.front();
    const double psi0 = u0[f.psi0_dof()];
    const LedgerRow& r0 = traj.ledger.front();
    auto N = [](const LedgerRow& r) {
        return r.dnorm1 * r.dnorm1 + r.norm1 * r.norm1 + r.norm2 * r.norm2;
    };
    const double I0 = N(r0) + f.sigma * f.xi * f.xi * psi0 * psi0;
    EnvelopeReport rep;
    if (I0 == 0.0) {
        rep.pass = true;
        for (const auto& r : traj.ledger)
            if (N(r) != 0.0) rep.pass = false;
        rep.explicit_pass = rep.pass;
        return rep;
    }
    rep.C = N(r0) / I0;

    // proof chain: K0, then K1 = 2 K0 / Lambda + 2 ||v0||_2^2
    const double K0 = f.J.quad(w0) + f.pressure_square.quad(u0) +
                      0.5 * f.sigma * f.xi * f.xi * psi0 * psi0;
    const double K1 = 2.0 * K0 / Lambda + 2.0 * r0.norm2 * r0.norm2;
    const double v0sq = r0.norm1 * r0.norm1;
    double int_v2 = 0.0;
    for (std::size_t k = 0; k < traj.ledger.size(); ++k) {
        const LedgerRow& r = traj.ledger[k];
        if (k > 0) {
            const LedgerRow& p = traj.ledger[k - 1];
            int_v2 += 0.5 * (r.t - p.t) * (r.norm2 * r.norm2 + p.norm2 * p.norm2);
        }
        double e = std::exp(2.0 * Lambda * r.t);
        rep.worst_ratio = std::max(rep.worst_ratio, N(r) / (rep.C * e * I0));
        double bv = e * v0sq + K1 / (2.0 * Lambda) * (e - 1.0);
        if (bv > 0.0)
            rep.explicit_ratio_v =
                std::max(rep.explicit_ratio_v, (r.norm1 * r.norm1 + int_v2) / bv);
        double bdv = e * (2.0 * Lambda * v0sq + K1);
        if (bdv > 0.0)
            rep.explicit_ratio_dv = std::max(
                rep.explicit_ratio_dv, (r.dnorm1 * r.dnorm1 / Lambda + r.norm2 * r.norm2) / bdv);
    }
    rep.pass = rep.worst_ratio <= margin;
    rep.explicit_pass = rep.explicit_ratio_v <= 1.0 + 1e-9 && rep.explicit_ratio_dv <= 1.0 + 1e-9;
    return rep;
}

std::vector<std::array<int, 2>> smallest_lattice_points(int n) {
    std::vector<std::array<int, 2>> pts;
    int R = 1;
    while (true) {
        pts.clear();
        for (int a = -R; a <= R; ++a)
            for (int b = -R; b <= R; ++b) pts.push_back({a, b});
        std::sort(pts.begin(), pts.end(), [](const auto& p, const auto& q) {
            long pp = p[0] * p[0] + p[1] * p[1], qq = q[0] * q[0] + q[1] * q[1];
            if (pp != qq) return pp < qq;
            return p < q;
        });
        // every point with |k| <= R is present, so the first n are exact once
        // the n-th has |k|^2 <= R^2
        if (static_cast<int>(pts.size()) >= n) {
            const auto& last = pts[n - 1];
            if (last[0] * last[0] + last[1] * last[1] <= R * R) break;
        }
        ++R;
    }
    pts.resize(n);
    return pts;
}

Vec smooth_random_field(const Mesh& mesh, unsigned seed, int n_modes, double amplitude) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    std::vector<double> a(n_modes), b(n_modes);
    for (int k = 0; k < n_modes; ++k) {
        a[k] = amplitude * U(rng) / (k + 1);
        b[k] = amplitude * U(rng) / (k + 1);
    }
    const double lo = mesh.lower_end(), H = mesh.upper_end() - lo;
    auto series = [&](const std::vector<double>& c, double x) {
        double s = 0.0;
        for (int k = 0; k < n_modes; ++k) s += c[k] * std::sin((k + 1) * std::numbers::pi * (x - lo) / H);
        return s;
    };
    return mesh.interpolate([&](double x) { return series(a, x); },
                            [&](double x) { return series(b, x); });
}

PeriodicStabilityReport periodic_stability_check(const SteadyProfile& profile, const Mesh& mesh,
                                                 double L,
                                                 const std::vector<LatticeModeData>& data,
                                                 double T, double dt, int threads) {
    const auto& geo = profile.geometry();
    if (!(L > 0.0)) throw ConfigError("periodic stability: L must be > 0");
    const double Lc = std::sqrt(geo.sigma / (geo.g * profile.jump()));
    if (!(geo.sigma > 0.0) || L > Lc * (1.0 + 1e-12))
        throw ConfigError(
            "periodic stability needs L <= sqrt(sigma / (g [[rho0]])); use lattice_modes for "
            "larger L");

    const int nm = static_cast<int>(data.size());
    std::vector<ModeTrajectory> trajs(nm);
    std::vector<double> K1(nm), K2(nm), cert(nm);
    parallel_for(nm, threads, [&](int i) {
        const auto& d = data[i];
        double xi = std::sqrt(static_cast<double>(d.k1 * d.k1 + d.k2 * d.k2)) / L;
        auto f = std::make_shared<FormSet>(assemble_lattice_mode(profile, mesh, xi));
        cert[i] = smallest_pencil(f->E0, f->J, -geo.g * xi).mu;
        const int i0 = f->psi0_dof();
        auto trace = [&](const Vec& x) { return 0.5 * geo.sigma * xi * xi * x[i0] * x[i0]; };
        K1[i] = f->J.quad(d.v0) + f->pressure_square.quad(d.u0) + trace(d.u0);
        // second time derivative at t = 0
        Vec a = f->E1.apply(d.v0), e0u = f->E0.apply(d.u0);
        for (std::size_t k = 0; k < a.size(); ++k) a[k] = -(a[k] + e0u[k]);
        BandCholesky chol(f->J);
        chol.solve_inplace(a.data());
        K2[i] = f->J.quad(a) + f->pressure_square.quad(d.v0) + trace(d.v0);
        trajs[i] = integrate(f, d.u0, d.v0, dt, T);
    });

    PeriodicStabilityReport rep;
    rep.modes = nm;
    rep.min_E0_eig = nm ? *std::min_element(cert.begin(), cert.end()) : 0.0;
    for (int i = 0; i < nm; ++i) rep.K1 += K1[i], rep.K2 += K2[i];
    if (nm == 0) {
        rep.pass = true;
        return rep;
    }
    const std::size_t steps = trajs[0].ledger.size();
    auto sum = [&](std::size_t k, auto get) {
        double s = 0.0;
        for (int i = 0; i < nm; ++i) s += get(trajs[i].ledger[k]);
        return s;
    };
    auto sq = [](double v) { return v * v; };
    const double n1_0 = std::sqrt(sum(0, [&](const LedgerRow& r) { return sq(r.norm1); }));
    const double n2_0 = std::sqrt(sum(0, [&](const LedgerRow& r) { return sq(r.norm2); }));
    const double dn2_0 = sum(0, [&](const LedgerRow& r) { return sq(r.dnorm2); });
    double sup_ps0 = 0.0, sup_dn2 = 0.0;
    for (std::size_t k = 0; k < steps; ++k) {
        double t = trajs[0].ledger[k].t;
        double n1 = std::sqrt(sum(k, [&](const LedgerRow& r) { return sq(r.norm1); }));
        double n2 = std::sqrt(sum(k, [&](const LedgerRow& r) { return sq(r.norm2); }));
        double dn1sq = sum(k, [&](const LedgerRow& r) { return sq(r.dnorm1); });
        double dn2sq = sum(k, [&](const LedgerRow& r) { return sq(r.dnorm2); });
        // int ||v'||_2^2 = 2 int w^T E1 w
        double diss = 2.0 * sum(k, [&](const LedgerRow& r) { return r.dissipated_cum; });
        double rhs = n1_0 + n2_0 + 3.0 * std::sqrt(t * rep.K1);
        if (rhs > 0.0) rep.bound_v_ratio = std::max(rep.bound_v_ratio, (n1 + n2) / rhs);
        else if (n1 + n2 > 0.0) rep.bound_v_ratio = INFINITY;
        double lhs = 0.5 * dn1sq + diss;
        sup_ps0 = std::max(sup_ps0, 0.5 * dn1sq);
        if (rep.K1 > 0.0) rep.ps0_strict_ratio = std::max(rep.ps0_strict_ratio, lhs / rep.K1);
        sup_dn2 = std::max(sup_dn2, dn2sq);
    }
    const double total_diss =
        2.0 * sum(steps - 1, [&](const LedgerRow& r) { return r.dissipated_cum; });
    if (rep.K1 > 0.0) rep.ps0_ratio = (sup_ps0 + total_diss) / (2.0 * rep.K1);
    double ps00_rhs = dn2_0 + 2.0 * std::sqrt(rep.K1 * rep.K2);
    if (ps00_rhs > 0.0) rep.ps00_ratio = sup_dn2 / ps00_rhs;
    rep.pass = rep.min_E0_eig >= -1e-9 && rep.bound_v_ratio <= 1.0 + 1e-12 && rep.ps0_ratio <= 1.0 &&
               rep.ps00_ratio <= 1.0;
    return rep;
}

}  // namespace rtg
