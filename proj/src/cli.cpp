#include "rtgrowth/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include "rtgrowth/config.hpp"
#include "rtgrowth/errors.hpp"
#include "rtgrowth/evolution.hpp"
#include "rtgrowth/kernels.hpp"
#include "rtgrowth/synthesis.hpp"
#include "rtgrowth/verify.hpp"

namespace fs = std::filesystem;

namespace rtg {

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string hex(std::uint64_t h) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

class Csv {
public:
    Csv(const fs::path& path, const std::string& header) : out_(path) {
        if (!out_) throw ConfigError("cannot write " + path.string());
        out_ << header << "\n";
    }
    void comment(const std::string& s) { out_ << "# " << s << "\n"; }
    void row(std::initializer_list<double> v) {
        bool first = true;
        for (double x : v) {
            if (!first) out_ << ',';
            out_ << num(x);
            first = false;
        }
        out_ << "\n";
    }

private:
    std::ofstream out_;
};

// run.meta: flat key = value lines merged across subcommands.
class Meta {
public:
    explicit Meta(fs::path dir) : path_(std::move(dir) / "run.meta") {
        std::ifstream in(path_);
        std::string line;
        while (std::getline(in, line)) {
            auto eq = line.find(" = ");
            if (eq != std::string::npos) kv_[line.substr(0, eq)] = line.substr(eq + 3);
        }
    }
    void clear() { kv_.clear(); }
    void set(const std::string& k, const std::string& v) { kv_[k] = v; }
    void set(const std::string& k, double v) { kv_[k] = num(v); }
    const std::string* get(const std::string& k) const {
        auto it = kv_.find(k);
        return it == kv_.end() ? nullptr : &it->second;
    }
    void save() const {
        std::ofstream out(path_);
        for (const auto& [k, v] : kv_) out << k << " = " << v << "\n";
    }

private:
    fs::path path_;
    std::map<std::string, std::string> kv_;
};

struct Ctx {
    std::string config_path;
    std::vector<std::string> overrides;
    int threads = 1;
    RunConfig cfg;

    void load() {
        cfg = config_path.empty() ? RunConfig::defaults() : RunConfig::load(config_path);
        for (const auto& o : overrides) cfg.set_override(o);
        cfg.validate();
    }
    fs::path out_dir() const {
        fs::path d = cfg.str("output.dir");
        fs::create_directories(d);
        return d;
    }
    fs::path out_path(const std::string& given, const std::string& name) const {
        if (!given.empty()) {
            fs::path p = given;
            if (p.has_parent_path()) fs::create_directories(p.parent_path());
            return p;
        }
        return out_dir() / name;
    }
    Meta meta(const std::string& sub) const {
        Meta m(out_dir());
        const std::string h = hex(cfg.hash());
        // a different configuration starts a fresh record
        if (const auto* old = m.get("config_hash"); old && *old != h) m.clear();
        m.set("config_hash", h);
        m.set("last_subcommand", sub);
        m.set("threads", std::to_string(threads));
        m.set("simd", kernels::isa_name(kernels::active_isa()));
        m.set("solver.fp_tol", cfg.str("solver.fp_tol"));
        m.set("solver.tolerance", cfg.str("solver.tolerance"));
        m.set("mesh.elements", cfg.str("mesh.elements"));
        m.set("mesh.order", cfg.str("mesh.order"));
        return m;
    }
};


DispersionCurve default_sweep(const Ctx& c, const SteadyProfile& p, const Mesh& m, int n) {
    double lo = c.cfg.has("sweep.xi_min") ? c.cfg.num("sweep.xi_min") : 0.02 * p.xi_c();
    double hi = c.cfg.has("sweep.xi_max") ? c.cfg.num("sweep.xi_max") : 0.98 * p.xi_c();
    return sweep(p, m, lo, hi, n, c.cfg.growth_options(), c.threads);
}

int cmd_profile(Ctx& c, int n, const std::string& out) {
    const SteadyProfile p = c.cfg.profile();
    if (n < 2) throw ConfigError("--n must be >= 2");
    const auto geo = p.geometry();
    Csv csv(c.out_path(out, "profile.csv"), "x3,rho0,Pprime_rho0,eps0,delta0");
    for (Side side : {Side::lower, Side::upper}) {
        const double a = side == Side::lower ? -geo.m : 0.0, b = side == Side::lower ? 0.0 : geo.ell;
        for (int i = 0; i < n; ++i) {
            double x = a + (b - a) * i / (n - 1);
            ProfilePoint q = p.at(side, x);
            csv.row({x, q.rho0, q.prho, q.eps0, q.delta0});
        }
    }
    Meta m = c.meta("profile");
    m.set("rho0_minus", p.rho_minus());
    m.set("rho0_plus", p.rho_plus());
    m.set("jump", p.jump());
    m.set("xi_c", p.xi_c());
    m.set("hydrostatic_residual", verify_hydrostatic(p, 50));
    m.save();
    std::printf("rho0- %.12g  rho0+ %.12g  [[rho0]] %.12g  xi_c %.12g\n", p.rho_minus(),
                p.rho_plus(), p.jump(), p.xi_c());
    return 0;
}

void dump_band(const SymBand& A, const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << "# row col value (0-based, both triangles)\n";
    for (int j = 0; j < A.n(); ++j)
        for (int i = std::max(0, j - A.kd()); i <= std::min(A.n() - 1, j + A.kd()); ++i) {
            double v = A.get(i, j);
            if (v != 0.0) out << i << ' ' << j << ' ' << num(v) << "\n";
        }
}

int cmd_forms(Ctx& c, double xi, bool dump) {
    const SteadyProfile p = c.cfg.profile();
    FormSet f = assemble(p, c.cfg.mesh(), xi);
    std::printf("dofs %d  bandwidth %d  c2 %.12g\n", f.n(), f.J.kd(), c2_diagnostic(f));
    if (dump) {
        fs::path d = c.out_dir();
        dump_band(f.E0, d / "E0.txt");
        dump_band(f.E1, d / "E1.txt");
        dump_band(f.J, d / "J.txt");
        std::printf("wrote %s/{E0,E1,J}.txt\n", d.string().c_str());
    }
    return 0;
}

int cmd_dispersion(Ctx& c, int n, const std::string& out) {
    const SteadyProfile p = c.cfg.profile();
    const Mesh mesh = c.cfg.mesh();
    if (p.geometry().sigma == 0.0 && !c.cfg.has("sweep.xi_max"))
        throw ConfigError("sweep.xi_max is required when geometry.sigma = 0");
    DispersionCurve curve = default_sweep(c, p, mesh, n > 0 ? n : c.cfg.integer("sweep.n"));
    Csv csv(c.out_path(out, "curve.csv"), "xi,lambda,s_star,psi0,residual");
    for (const auto& s : curve.samples) {
        if (is_unstable(s.outcome)) {
            const auto& md = mode_of(s.outcome);
            csv.row({s.xi, md.lambda, md.s_star, md.diag.psi0, md.diag.fixed_point_residual});
        } else {
            csv.row({s.xi, 0.0, 0.0, 0.0, 0.0});
        }
    }
    Meta m = c.meta("dispersion");
    m.set("Lambda", curve.Lambda);
    m.set("Lambda_argmax", curve.argmax);
    m.set("Lambda_sample_max", curve.sample_max);
    m.set("Lambda_fit_tolerance", curve.fit_tolerance);
    m.set("sweep.n", std::to_string(curve.samples.size()));
    if (const auto* ll = m.get("Lambda_L")) {
        bool ok = std::stod(*ll) <= curve.Lambda + 1e-3;
        m.set("Lambda_L_le_Lambda", ok ? "pass" : "fail");
    }
    m.save();
    std::printf("Lambda %.12g at |xi| %.12g (fit tolerance %.3g)\n", curve.Lambda, curve.argmax,
                curve.fit_tolerance);
    return 0;
}

int cmd_lattice(Ctx& c, double L, const std::string& out) {
    const SteadyProfile p = c.cfg.profile();
    if (!(L > 0.0)) L = c.cfg.num("lattice.L");
    DispersionCurve curve = lattice_modes(p, c.cfg.mesh(), L, c.cfg.opt_num("lattice.xi_max"),
                                          c.cfg.growth_options(), c.threads);
    Csv csv(c.out_path(out, "lattice.csv"), "k1,k2,xi,lambda");
    if (curve.certificate) csv.comment("certificate: stable");
    for (const auto& q : curve.points) csv.row({double(q.k1), double(q.k2), q.xi, q.lambda});
    Meta m = c.meta("lattice");
    m.set("lattice.L", L);
    m.set("Lambda_L", curve.Lambda_L);
    m.set("lattice_certificate", curve.certificate ? "stable" : "unstable");
    if (const auto* lam = m.get("Lambda")) {
        bool ok = curve.Lambda_L <= std::stod(*lam) + 1e-3;
        m.set("Lambda_L_le_Lambda", ok ? "pass" : "fail");
    }
    m.save();
    if (curve.certificate) std::printf("certificate: stable (no growing lattice modes)\n");
    else std::printf("Lambda_L %.12g over %zu lattice points\n", curve.Lambda_L, curve.points.size());
    return 0;
}

int cmd_mode(Ctx& c, double xi, const std::string& out) {
    const SteadyProfile p = c.cfg.profile();
    GrowthOutcome o = growth_rate(p, c.cfg.mesh(), xi, c.cfg.growth_options());
    if (!is_unstable(o)) {
        const Stable& s = std::get<Stable>(o);
        std::printf("stable at |xi| %.12g: %s%s\n", xi, s.reason.c_str(),
                    s.resolution_warning ? " (resolution warning: refine mesh.elements)" : "");
        return 0;
    }
    const ModeSolution& md = mode_of(o);
    Csv csv(c.out_path(out, "mode.csv"), "x3,phi,psi");
    Vec phi, psi;
    md.nodal(phi, psi);
    for (int i = 0; i < md.mesh.n_nodes(); ++i) csv.row({md.mesh.node_x(i), phi[i], psi[i]});
    Meta m = c.meta("mode");
    m.set("mode.xi", xi);
    m.set("mode.lambda", md.lambda);
    m.set("mode.psi0", md.diag.psi0);
    m.set("mode.ode_residual", md.diag.ode_residual);
    m.save();
    std::printf("lambda %.12g  s* %.12g  psi(0) %.6g  ode residual %.3e  jumps %.3e %.3e\n",
                md.lambda, md.s_star, md.diag.psi0, md.diag.ode_residual, md.diag.jump_tangential,
                md.diag.jump_normal);
    return 0;
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> v;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            v.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw ConfigError("bad number '" + item + "' in list");
        }
    }
    return v;
}

int cmd_synthesize(Ctx& c, const std::string& times, const std::string& grid,
                   const std::string& out) {
    const SteadyProfile p = c.cfg.profile();
    const Mesh mesh = c.cfg.mesh();
    const auto geo = p.geometry();
    std::vector<double> ts = parse_list(times), g = parse_list(grid);
    if (ts.empty()) throw ConfigError("--t needs at least one time");
    if (g.size() != 3) throw ConfigError("--grid must be nx,ny,nz");
    Grid3 box;
    for (int i = 0; i < 3; ++i) box.n[i] = static_cast<int>(g[i]);
    box.x3 = {-geo.m, geo.ell};
    fs::path dir = out.empty() ? c.out_dir() / "fields" : fs::path(out);
    fs::create_directories(dir);
    Meta m = c.meta("synthesize");

    std::function<FieldValue(const Point3&, double)> eval;
    std::unique_ptr<PeriodicField> pf;
    std::unique_ptr<NonperiodicField> nf;
    DispersionCurve lat;
    if (geo.L) {
        lat = lattice_modes(p, mesh, *geo.L, c.cfg.opt_num("lattice.xi_max"),
                            c.cfg.growth_options(), c.threads);
        pf = std::make_unique<PeriodicField>(p, lat);
        const double P = 2.0 * std::acos(-1.0) * *geo.L;
        box.x1 = box.x2 = {0.0, P};
        eval = [&](const Point3& x, double t) { return pf->eval(x, t); };
        m.set("synthesis.kind", "periodic");
        m.set("Lambda_L", pf->rate());
    } else {
        BumpSpec f = p.geometry().sigma > 0.0 ? default_bump(p) : BumpSpec{};
        if (c.cfg.has("synthesis.f.a")) f.a = c.cfg.num("synthesis.f.a");
        if (c.cfg.has("synthesis.f.b")) f.b = c.cfg.num("synthesis.f.b");
        f.amp = c.cfg.num("synthesis.f.amp");
        SynthesisOptions so;
        so.radial = c.cfg.integer("synthesis.radial");
        so.angular = c.cfg.integer("synthesis.angular");
        so.growth = c.cfg.growth_options();
        so.threads = c.threads;
        nf = std::make_unique<NonperiodicField>(p, mesh, f, so);
        const double e = c.cfg.num("synthesis.extent");
        box.x1 = box.x2 = {-e, e};
        eval = [&](const Point3& x, double t) { return nf->eval(x, t); };
        m.set("synthesis.kind", "nonperiodic");
        m.set("synthesis.lambda0", nf->lambda0());
        m.set("synthesis.f.a", f.a);
        m.set("synthesis.f.b", f.b);
    }
    const std::vector<Point3> pts = box.points();
    double worst_imag = 0.0;
    for (double t : ts) {
        std::vector<FieldValue> vals(pts.size());
        parallel_for(static_cast<int>(pts.size()), c.threads,
                     [&](int i) { vals[i] = eval(pts[i], t); });
        Csv csv(dir / ("fields_t" + num(t) + ".csv"), "x1,x2,x3,eta1,eta2,eta3,v1,v2,v3,q");
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const auto& v = vals[i];
            worst_imag = std::max(worst_imag, v.imag);
            csv.row({pts[i].x1, pts[i].x2, pts[i].x3, v.eta[0], v.eta[1], v.eta[2], v.v[0], v.v[1],
                     v.v[2], v.q});
        }
    }
    m.set("synthesis.max_imag", worst_imag);
    m.save();
    std::printf("wrote %zu time slices of %zu points to %s\n", ts.size(), pts.size(),
                dir.string().c_str());
    return 0;
}

int cmd_evolve(Ctx& c, double xi, double T, double dt, const std::string& out) {
    const SteadyProfile p = c.cfg.profile();
    const Mesh mesh = c.cfg.mesh();
    if (!(xi > 0.0)) {
        if (c.cfg.has("evolution.xi")) xi = c.cfg.num("evolution.xi");
        else xi = default_sweep(c, p, mesh, c.cfg.integer("sweep.n")).argmax;
    }
    GrowthOutcome o = growth_rate(p, mesh, xi, c.cfg.growth_options());
    const double lam = is_unstable(o) ? mode_of(o).lambda : 0.0;
    auto f = std::make_shared<FormSet>(assemble(p, mesh, xi));
    Vec u0, v0;
    if (c.cfg.has("evolution.seed") || lam == 0.0) {
        unsigned seed = c.cfg.has("evolution.seed") ? c.cfg.integer("evolution.seed") : 1u;
        u0 = smooth_random_field(mesh, 2 * seed);
        v0 = smooth_random_field(mesh, 2 * seed + 1);
    } else {
        u0 = mode_of(o).x;
        v0 = u0;
        for (double& x : v0) x *= lam;
    }
    if (!(dt > 0.0)) dt = c.cfg.has("evolution.dt") ? c.cfg.num("evolution.dt") : default_dt(lam);
    if (!(T > 0.0)) T = c.cfg.has("evolution.T") ? c.cfg.num("evolution.T") : (lam > 0 ? 5.0 / lam : 50.0);
    ModeTrajectory tr = integrate(f, u0, v0, dt, T);
    Csv csv(c.out_path(out, "traj.csv"), "t,kinetic,potential,dissipated_cum,norm1,norm2");
    for (const auto& r : tr.ledger)
        csv.row({r.t, r.kinetic, r.potential, r.dissipated_cum, r.norm1, r.norm2});
    double defect = energy_identity_check(tr);
    Meta m = c.meta("evolve");
    m.set("evolution.xi", xi);
    m.set("evolution.lambda", lam);
    m.set("evolution.dt", dt);
    m.set("evolution.T", T);
    m.set("energy_defect", defect);
    m.save();
    std::printf("|xi| %.12g  lambda %.12g  dt %.6g  steps %zu  energy defect %.3e\n", xi, lam, dt,
                tr.ledger.size() - 1, defect);
    return 0;
}

int cmd_verify(Ctx& c) {
    BatteryOptions bo;
    bo.threads = c.threads;
    bo.on_check = [](const Check& k) {
        std::printf("%s\n", format_check(k).c_str());
        std::fflush(stdout);
    };
    std::printf("%-4s %2s  %-34s %12s %-3s %10s  %s\n", "", "#", "invariant", "measured", "", "limit",
                "detail");
    std::vector<Check> checks = run_battery(c.cfg, bo);
    int failed = 0;
    Meta m = c.meta("verify");
    for (const auto& k : checks) {
        if (!k.pass) ++failed;
        m.set("verify." + std::to_string(k.id), k.skipped ? "skip" : (k.pass ? "pass" : "fail"));
    }
    m.set("verify.failed", std::to_string(failed));
    m.save();
    std::printf("%d of %zu checks failed\n", failed, checks.size());
    return failed ? 4 : 0;
}

std::string keys_help() {
    std::ostringstream os;
    os << "Config keys (flat `section.key = value`, # comments; unknown keys are errors):\n";
    for (const auto& k : config_keys()) {
        char buf[256];
        std::snprintf(buf, sizeof buf, "  %-28s %-12s %s\n", k.key,
                      k.default_value ? k.default_value : "(unset)", k.doc);
        os << buf;
    }
    return os.str();
}

}  // namespace

int run_cli(int argc, char** argv) {
    CLI::App app{"Linear Rayleigh-Taylor growth rates for a viscous compressible two-layer slab"};
    app.footer(keys_help());
    app.require_subcommand(1);
    Ctx ctx;
    app.add_option("-c,--config", ctx.config_path, "config file")->check(CLI::ExistingFile);
    app.add_option("--set", ctx.overrides, "override a key: --set geometry.sigma=0.2");
    app.add_option("--threads", ctx.threads, "worker threads")->check(CLI::Range(1, 1024));

    std::function<int()> action;
    std::string out;

    int n_profile = 101;
    auto* sp = app.add_subcommand("profile", "steady profile CSV x3,rho0,Pprime_rho0,eps0,delta0");
    sp->add_option("--n", n_profile, "points per side");
    sp->add_option("--out", out, "output CSV");
    sp->callback([&] { action = [&] { return cmd_profile(ctx, n_profile, out); }; });

    double xi = 0.0;
    bool dump = false;
    auto* sf = app.add_subcommand("forms", "assemble E0, E1, J at one |xi|");
    sf->add_option("--xi", xi, "frequency magnitude")->required();
    sf->add_flag("--dump", dump, "write matrices as row col value text");
    sf->callback([&] { action = [&] { return cmd_forms(ctx, xi, dump); }; });

    int n_sweep = 0;
    auto* sd = app.add_subcommand("dispersion", "sweep lambda(|xi|), CSV xi,lambda,s_star,psi0,residual");
    sd->add_option("--n", n_sweep, "samples (default sweep.n)");
    sd->add_option("--out", out, "output CSV");
    sd->callback([&] { action = [&] { return cmd_dispersion(ctx, n_sweep, out); }; });

    double L = 0.0;
    auto* sl = app.add_subcommand("lattice", "lattice rates, CSV k1,k2,xi,lambda");
    sl->add_option("--L", L, "period scale (default lattice.L)");
    sl->add_option("--out", out, "output CSV");
    sl->callback([&] { action = [&] { return cmd_lattice(ctx, L, out); }; });

    auto* sm = app.add_subcommand("mode", "growing mode profile at one |xi|, CSV x3,phi,psi");
    sm->add_option("--xi", xi, "frequency magnitude")->required();
    sm->add_option("--out", out, "output CSV");
    sm->callback([&] { action = [&] { return cmd_mode(ctx, xi, out); }; });

    std::string times = "0", grid = "16,16,16";
    auto* ss = app.add_subcommand("synthesize", "3D fields, one CSV per time");
    ss->add_option("--t", times, "comma separated times");
    ss->add_option("--grid", grid, "nx,ny,nz");
    ss->add_option("--out", out, "output directory");
    ss->callback([&] { action = [&] { return cmd_synthesize(ctx, times, grid, out); }; });

    double T = 0.0, dt = 0.0;
    auto* se = app.add_subcommand("evolve", "integrate one mode, CSV t,kinetic,potential,dissipated_cum,norm1,norm2");
    se->add_option("--xi", xi, "frequency magnitude (default evolution.xi or the argmax)");
    se->add_option("--T", T, "horizon");
    se->add_option("--dt", dt, "time step");
    se->add_option("--out", out, "output CSV");
    se->callback([&] { action = [&] { return cmd_evolve(ctx, xi, T, dt, out); }; });

    auto* sv = app.add_subcommand("verify", "run the invariant battery");
    sv->callback([&] { action = [&] { return cmd_verify(ctx); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    try {
        ctx.load();
        return action();
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return 2;
    } catch (const DomainError& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return 2;
    } catch (const RangeError& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return 2;
    } catch (const SolverError& e) {
        std::fprintf(stderr, "solver error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}

}  // namespace rtg
