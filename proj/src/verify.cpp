#include "rtgrowth/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <random>

#include "rtgrowth/errors.hpp"
#include "rtgrowth/evolution.hpp"
#include "rtgrowth/synthesis.hpp"

namespace rtg {

std::string format_check(const Check& c) {
    char buf[512];
    std::snprintf(buf, sizeof buf, "%-4s %2d  %-34s %12.4e %-3s %10.3e  %s",
                  c.skipped ? "SKIP" : (c.pass ? "PASS" : "FAIL"), c.id, c.name.c_str(), c.value,
                  c.relation.c_str(), c.limit, c.detail.c_str());
    return buf;
}

namespace {

Check make_check(int id, std::string name, double value, double limit, std::string rel) {
    Check c;
    c.id = id;
    c.name = std::move(name);
    c.value = value;
    c.limit = limit;
    c.relation = std::move(rel);
    return c;
}

std::vector<double> logspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i)
        v[i] = n == 1 ? a : std::exp(std::log(a) + (std::log(b) - std::log(a)) * i / (n - 1));
    return v;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

double inf_norm(const Vec& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

// empirical order over successive halvings; exact zeros count as converged
double observed_order(const std::vector<double>& r) {
    double order = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < r.size(); ++i) {
        if (r[i] <= 1e-14 && r[i + 1] <= 1e-14) continue;
        order = std::min(order, std::log2(r[i] / r[i + 1]));
    }
    return order;
}

struct Battery {
    const RunConfig& cfg;
    BatteryOptions opt;
    SteadyProfile profile;
    Mesh mesh;
    GrowthOptions gopt;
    double xc;
    bool tension;
    DispersionCurve curve;
    std::vector<Check> out;

    Battery(const RunConfig& c, const BatteryOptions& o)
        : cfg(c), opt(o), profile(c.profile()), mesh(c.mesh()), gopt(c.growth_options()) {
        xc = profile.xi_c();
        tension = profile.geometry().sigma > 0.0;
    }

    void add(Check c) {
        if (opt.on_check) opt.on_check(c);
        out.push_back(std::move(c));
    }
    void skip(int id, const std::string& name, const std::string& why) {
        Check c;
        c.id = id;
        c.name = name;
        c.skipped = c.pass = true;
        c.detail = why;
        add(c);
    }

    double xi_min() const {
        return cfg.has("sweep.xi_min") ? cfg.num("sweep.xi_min") : 0.02 * xc;
    }
    double xi_max() const {
        return cfg.has("sweep.xi_max") ? cfg.num("sweep.xi_max") : 0.98 * xc;
    }

    void hydrostatic() {
        double r1 = verify_hydrostatic(profile, 50, 1e-4);
        double r2 = verify_hydrostatic(profile, 50, 5e-5);
        double ratio = r1 / r2;
        Check c = make_check(1, "hydrostatic residual", r1, 1e-6, "<=");
        c.pass = r1 <= 1e-6 && ratio >= 3.2 && ratio <= 4.8;
        c.detail = fmt("halving ratio %.3f (want 4 +- 20%%)", ratio);
        add(c);
    }

    void lower_bound() {
        double worst = INFINITY;
        const double g = profile.geometry().g;
        for (double xi : {0.1, 1.0, 3.0}) {
            FormSet f = assemble(profile, mesh, xi);
            for (double s : {0.01, 0.1, 1.0, 10.0})
                worst = std::min(worst, smallest_eig(f, s).mu + g * xi);
        }
        Check c = make_check(2, "mu(s) >= -g|xi|", worst, -1e-9, ">=");
        c.pass = worst >= -1e-9;
        c.detail = "min of mu + g|xi| over 12 (xi, s)";
        add(c);
    }

    void monotone() {
        FormSet f = assemble(profile, mesh, 1.0);
        auto s = logspace(0.01, 10.0, 20);
        std::vector<double> mu(20), e1(20);
        for (int i = 0; i < 20; ++i) {
            EigenResult r = smallest_eig(f, s[i]);
            mu[i] = r.mu;
            e1[i] = f.E1.quad(r.minimizer);
        }
        const double K = *std::max_element(e1.begin(), e1.end());
        double worst_lip = 0.0, worst_dec = INFINITY;
        bool ok = true;
        for (int i = 0; i + 1 < 20; ++i) {
            double d = mu[i + 1] - mu[i];
            worst_dec = std::min(worst_dec, d);
            if (e1[i + 1] > 1e-12 ? !(d > 0.0) : d < -1e-12 * (1.0 + std::abs(mu[i]))) ok = false;
            worst_lip = std::max(worst_lip, std::abs(d) / (K * (s[i + 1] - s[i])));
        }
        Check c = make_check(3, "mu monotone and Lipschitz", worst_lip, 1.0, "<=");
        c.pass = ok && worst_lip <= 1.0;
        c.detail = fmt("min step increase %.3e, K %.4f", worst_dec, K);
        add(c);
    }

    void run_sweep() {
        curve = sweep(profile, mesh, xi_min(), xi_max(), cfg.integer("sweep.n"), gopt, opt.threads);
    }

    void window() {
        if (!tension) return skip(4, "instability window", "sigma = 0");
        bool ok = true;
        double worst_fp = 0.0;
        int n = 0;
        for (const auto& s : curve.samples) {
            if (is_unstable(s.outcome))
                worst_fp = std::max(worst_fp, mode_of(s.outcome).diag.fixed_point_residual);
            if (s.xi > 0.05 * xc && s.xi < 0.95 * xc) {
                ++n;
                if (!(s.lambda() > 0.0)) ok = false;
            }
        }
        for (double k : {1.0, 1.5, 3.0})
            if (is_unstable(growth_rate(profile, mesh, k * xc, gopt))) ok = false;
        Check c = make_check(4, "instability window", worst_fp, 1e-9, "<=");
        c.pass = ok && worst_fp <= 1e-9;
        c.detail = fmt("%g unstable samples inside, stable at 1, 1.5, 3 xi_c", n);
        add(c);
    }

    void rate_bounds() {
        const double g = profile.geometry().g, sg = profile.geometry().sigma;
        double w1 = -INFINITY, w2 = -INFINITY;
        for (const auto& s : curve.samples) {
            double l2 = s.lambda() * s.lambda();
            w1 = std::max(w1, l2 - g * s.xi);
            if (tension)
                w2 = std::max(w2, l2 - g * (g * profile.jump() - sg * s.xi * s.xi) / (sg * s.xi));
        }
        Check c = make_check(5, "lambda^2 <= g|xi| (+ sigma bound)", w1, 1e-8, "<=");
        c.pass = w1 <= 1e-8 && (!tension || w2 <= 1e-6);
        c.detail = tension ? fmt("sigma chain max excess %.3e (limit 1e-6)", w2) : "sigma = 0";
        add(c);
    }

    void endpoints() {
        if (curve.samples.size() < 2) return skip(6, "endpoint limits", "single sample");
        double lo = curve.samples.front().lambda(), hi = curve.samples.back().lambda();
        double worst = std::max(lo, hi) / curve.Lambda;
        Check c = make_check(6, "endpoint lambda / Lambda", worst, 1.0 / 3.0, "<");
        c.pass = worst < 1.0 / 3.0;
        c.detail = fmt("lambda(lo) %.4e, lambda(hi) %.4e, Lambda %.6f", lo, hi, curve.Lambda);
        add(c);
    }

    void fidelity() {
        std::vector<double> xs;
        if (tension) xs = {0.2 * xc, 0.5 * xc, 0.8 * xc};
        else xs = {curve.argmax};
        const int n0 = cfg.integer("mesh.elements");
        const int order = cfg.integer("mesh.order"), quad = cfg.integer("mesh.quad");
        const auto geo = profile.geometry();
        double worst = INFINITY;
        std::vector<double> meas(xs.size() * 3 * 5);
        parallel_for(static_cast<int>(xs.size() * 3), opt.threads, [&](int job) {
            int i = job / 3, lev = job % 3;
            int n = n0 / 2 << lev;
            Mesh m = Mesh::uniform(geo.m, geo.ell, n, n, order, quad);
            GrowthOutcome o = growth_rate(profile, m, xs[i], gopt);
            if (!is_unstable(o)) throw SolverError("fidelity: expected a growing mode");
            const auto& d = mode_of(o).diag;
            double v[5] = {d.ode_residual, d.jump_phi, d.jump_psi, d.jump_tangential,
                           d.jump_normal};
            for (int q = 0; q < 5; ++q) meas[(i * 5 + q) * 3 + lev] = v[q];
        });
        std::string det;
        for (std::size_t i = 0; i < xs.size(); ++i)
            for (int q = 0; q < 5; ++q) {
                std::vector<double> r(meas.begin() + (i * 5 + q) * 3,
                                      meas.begin() + (i * 5 + q) * 3 + 3);
                worst = std::min(worst, observed_order(r));
            }
        double min_psi0 = INFINITY;
        for (const auto& s : curve.samples)
            if (is_unstable(s.outcome))
                min_psi0 = std::min(min_psi0, std::abs(mode_of(s.outcome).diag.psi0));
        Check c = make_check(7, "mode fidelity order", worst, 1.5, ">=");
        c.pass = worst >= 1.5 && min_psi0 >= 1e-6;
        c.detail = fmt("elements/side %g..%g, min |psi(0)| %.3e", n0 / 2, n0 * 2, min_psi0);
        add(c);
    }

    void lambda_convergence() {
        const auto geo = profile.geometry();
        const int n = cfg.integer("mesh.elements");
        Mesh fine = Mesh::uniform(geo.m, geo.ell, 2 * n, 2 * n, cfg.integer("mesh.order"),
                                  cfg.integer("mesh.quad"));
        DispersionCurve c2 =
            sweep(profile, fine, xi_min(), xi_max(), cfg.integer("sweep.n"), gopt, opt.threads);
        double rel = std::abs(c2.Lambda - curve.Lambda) / curve.Lambda;
        Check c = make_check(8, "Lambda change under refinement", rel, 5e-3, "<=");
        c.pass = rel <= 5e-3;
        c.detail = fmt("Lambda %.8f -> %.8f", curve.Lambda, c2.Lambda);
        add(c);
    }

    void lattice() {
        if (!tension) return skip(9, "lattice certificate", "sigma = 0");
        const double Lc = std::sqrt(profile.geometry().sigma / (profile.geometry().g * profile.jump()));
        DispersionCurve cert = lattice_modes(profile, mesh, Lc, std::nullopt, gopt, opt.threads);
        DispersionCurve one = lattice_modes(profile, mesh, 1.0, std::nullopt, gopt, opt.threads);
        double excess = one.Lambda_L - curve.Lambda;
        Check c = make_check(9, "lattice certificate, Lambda_L - Lambda", excess, 1e-3, "<=");
        c.pass = cert.certificate && cert.points.empty() && !one.points.empty() && excess <= 1e-3;
        c.detail = fmt("L=Lc stable: %g, L=1 unstable points %g, Lambda_L %.6f",
                       cert.certificate ? 1.0 : 0.0, static_cast<double>(one.points.size()),
                       one.Lambda_L);
        add(c);
    }

    void growing_mode() {
        GrowthOutcome o = growth_rate(profile, mesh, curve.argmax, gopt);
        if (!is_unstable(o)) throw SolverError("no growing mode at the argmax");
        const ModeSolution& md = mode_of(o);
        const double lam = md.lambda;
        auto f = std::make_shared<FormSet>(assemble(profile, mesh, md.xi));
        Vec a = f->J.apply(md.x), b = f->E1.apply(md.x), e = f->E0.apply(md.x), r(a.size());
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = lam * lam * a[i] + lam * b[i] + e[i];
        double scale = std::max({lam * lam * inf_norm(a), lam * inf_norm(b), inf_norm(e)});
        double pencil = inf_norm(r) / scale;
        Vec v0 = md.x;
        for (double& x : v0) x *= lam;
        ModeTrajectory tr = integrate(f, md.x, v0, 1e-3 / lam, 3.0 / lam);
        const auto& L0 = tr.ledger.front();
        const auto& L1 = tr.ledger.back();
        double err = std::abs(std::log(L1.norm1 / L0.norm1) - lam * L1.t) / (lam * L1.t);
        Check c = make_check(10, "growing-mode log-rate error", err, 1e-2, "<=");
        c.pass = err <= 1e-2 && pencil <= 1e-8;
        c.detail = fmt("pencil residual %.3e of scale (limit 1e-8), lambda %.6f", pencil, lam);
        add(c);
    }

    void energy() {
        GrowthOutcome o = growth_rate(profile, mesh, curve.argmax, gopt);
        const double lam = is_unstable(o) ? mode_of(o).lambda : curve.Lambda;
        auto f = std::make_shared<FormSet>(assemble(profile, mesh, curve.argmax));
        Vec u0 = smooth_random_field(mesh, 11), v0 = smooth_random_field(mesh, 12);
        const double dt = default_dt(lam), T = 5.0 / lam;
        double d1 = energy_identity_check(integrate(f, u0, v0, dt, T));
        double d2 = energy_identity_check(integrate(f, u0, v0, 2 * dt, T));
        double ratio = d2 / d1;
        Check c = make_check(11, "energy identity defect", d1, 1e-6, "<=");
        c.pass = d1 <= 1e-6 && ratio >= 3.3 && ratio <= 4.7;
        c.detail = fmt("dt %.3e, defect ratio 2dt/dt %.3f (want 3.3..4.7)", dt, ratio);
        add(c);
    }

    void envelope() {
        std::vector<double> xs = logspace(xi_min(), xi_max(), 9);
        xs.push_back(curve.argmax);
        std::vector<double> me(xs.size());
        parallel_for(static_cast<int>(xs.size()), opt.threads, [&](int i) {
            me[i] = growth_bound_check(assemble(profile, mesh, xs[i]), curve.Lambda).min_eig;
        });
        double worst = *std::min_element(me.begin(), me.end());
        GrowthBoundReport half =
            growth_bound_check(assemble(profile, mesh, curve.argmax), 0.5 * curve.Lambda);
        Check c = make_check(12, "E0 + L E1 + L^2 J min eig", worst, -1e-8, ">=");
        c.pass = worst >= -1e-8 && !half.pass;
        c.detail = fmt("at Lambda/2: %.4e (must fail)", half.min_eig);
        add(c);
    }

    void periodic() {
        if (!tension) return skip(13, "periodic stability", "sigma = 0");
        const int nm = cfg.integer("periodic.modes");
        const unsigned seed = static_cast<unsigned>(cfg.integer("periodic.seed"));
        std::vector<LatticeModeData> data;
        unsigned k = 0;
        for (auto p : smallest_lattice_points(nm)) {
            data.push_back({p[0], p[1], smooth_random_field(mesh, seed * 7919u + k),
                            smooth_random_field(mesh, seed * 7919u + k + 1)});
            k += 2;
        }
        PeriodicStabilityReport r =
            periodic_stability_check(profile, mesh, cfg.num("periodic.L"), data,
                                     cfg.num("periodic.T"), cfg.num("periodic.dt"), opt.threads);
        double worst = std::max(r.bound_v_ratio, r.ps0_ratio);
        Check c = make_check(13, "periodic stability bound ratio", worst, 1.0, "<=");
        c.pass = r.pass;
        c.detail = fmt("v %.4f, sup/int %.4f, strict %.4f", r.bound_v_ratio, r.ps0_ratio,
                       r.ps0_strict_ratio) +
                   fmt(", j=2 sup %.4f, min E0 eig %.2e", r.ps00_ratio, r.min_E0_eig);
        add(c);
    }

    void synthesis() {
        if (!tension && !(cfg.has("synthesis.f.a") && cfg.has("synthesis.f.b")))
            return skip(14, "synthesis", "sigma = 0 and no synthesis.f.a/b");
        BumpSpec f = tension ? default_bump(profile) : BumpSpec{};
        if (cfg.has("synthesis.f.a")) f.a = cfg.num("synthesis.f.a");
        if (cfg.has("synthesis.f.b")) f.b = cfg.num("synthesis.f.b");
        f.amp = cfg.num("synthesis.f.amp");
        SynthesisOptions so;
        so.radial = cfg.integer("synthesis.radial");
        so.angular = cfg.integer("synthesis.angular");
        so.growth = gopt;
        so.threads = opt.threads;
        NonperiodicField nf(profile, mesh, f, so);
        const double ext = cfg.num("synthesis.extent");
        const auto geo = profile.geometry();
        std::mt19937_64 rng(2024);
        std::uniform_real_distribution<double> U(-1.0, 1.0), A(0.0, 2.0 * std::acos(-1.0));
        double reality = 0.0, rot = 0.0;
        for (int i = 0; i < 10; ++i) {
            Point3 p{ext * U(rng), ext * U(rng), 0.0};
            p.x3 = U(rng) > 0 ? 0.95 * geo.ell * std::abs(U(rng)) : -0.95 * geo.m * std::abs(U(rng));
            for (double t : {0.0, 1.0}) {
                FieldValue v = nf.eval(p, t);
                double mag = 0.0;
                for (int c = 0; c < 3; ++c) mag = std::max({mag, std::abs(v.eta[c]), std::abs(v.v[c])});
                mag = std::max(mag, std::abs(v.q));
                reality = std::max(reality, v.imag / mag);
                double a = A(rng), ca = std::cos(a), sa = std::sin(a);
                FieldValue w = nf.eval({ca * p.x1 - sa * p.x2, sa * p.x1 + ca * p.x2, p.x3}, t);
                double d = std::max({std::abs(w.eta[0] - (ca * v.eta[0] - sa * v.eta[1])),
                                     std::abs(w.eta[1] - (sa * v.eta[0] + ca * v.eta[1])),
                                     std::abs(w.eta[2] - v.eta[2]),
                                     std::abs(w.v[0] - (ca * v.v[0] - sa * v.v[1])),
                                     std::abs(w.v[1] - (sa * v.v[0] + ca * v.v[1])),
                                     std::abs(w.v[2] - v.v[2]), std::abs(w.q - v.q)});
                rot = std::max(rot, d / mag);
            }
        }
        bool sandwich = true;
        double worst_lo = INFINITY, worst_hi = INFINITY;
        for (double t : {1.0, 2.0})
            for (Field fld : {Field::eta, Field::v, Field::q})
                for (int k = 0; k <= (fld == Field::q ? 1 : 2); ++k) {
                    double r = nf.sobolev_norm(fld, k, t) / nf.sobolev_norm(fld, k, 0.0);
                    double lo = std::exp(t * nf.lambda0()), hi = std::exp(t * curve.Lambda);
                    worst_lo = std::min(worst_lo, r / lo);
                    worst_hi = std::min(worst_hi, hi / r);
                    if (!(r >= lo && r <= hi)) sandwich = false;
                }
        Check c = make_check(14, "synthesis reality residual", reality, 1e-10, "<=");
        c.pass = reality <= 1e-10 && sandwich && rot <= 1e-8;
        c.detail = fmt("sandwich margins lo %.4f hi %.4f, rotation %.2e (limit 1e-8)", worst_lo,
                       worst_hi, rot);
        add(c);
    }

    void parseval() {
        const auto cap = cfg.opt_num("lattice.xi_max");
        if (!tension && !cap) return skip(15, "Parseval consistency", "sigma = 0 and no lattice.xi_max");
        DispersionCurve lat =
            lattice_modes(profile, mesh, cfg.num("lattice.L"), cap, gopt, opt.threads);
        if (lat.certificate) return skip(15, "Parseval consistency", "lattice.L is in the stable range");
        PeriodicField pf(profile, lat);
        const int kmax = std::max(std::abs(pf.k()[0]), std::abs(pf.k()[1]));
        double worst = 0.0;
        for (Field fld : {Field::eta, Field::v, Field::q}) {
            double direct = periodic_direct_l2(pf, fld, 0.0, 4 * kmax + 4);
            double spectral = pf.sobolev_norm(fld, 0, 0.0);
            worst = std::max(worst, std::abs(direct - spectral) / spectral);
        }
        Check c = make_check(15, "Parseval relative difference", worst, 1e-6, "<=");
        c.pass = worst <= 1e-6;
        c.detail = fmt("lattice pair k = (%g, %g), rate %.6f", pf.k()[0], pf.k()[1], pf.rate());
        add(c);
    }
};

}  // namespace

std::vector<Check> run_battery(const RunConfig& cfg, const BatteryOptions& opt) {
    cfg.validate();
    Battery b(cfg, opt);
    b.hydrostatic();
    b.lower_bound();
    b.monotone();
    b.run_sweep();
    b.window();
    b.rate_bounds();
    b.endpoints();
    b.fidelity();
    b.lambda_convergence();
    b.lattice();
    b.growing_mode();
    b.energy();
    b.envelope();
    b.periodic();
    b.synthesis();
    b.parseval();
    return b.out;
}

}  // namespace rtg
