#include "rtgrowth/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "rtgrowth/errors.hpp"

namespace rtg {

const std::vector<KeyInfo>& config_keys() {
    static const std::vector<KeyInfo> keys = {
        {"fluid.lower.law", "polytropic", "lower pressure law: polytropic or tabulated"},
        {"fluid.lower.K", "2", "lower polytropic scale K- > 0, P = K rho^gamma"},
        {"fluid.lower.gamma", "1", "lower adiabatic exponent gamma- >= 1"},
        {"fluid.lower.table", nullptr, "lower table CSV with header rho,P (law = tabulated)"},
        {"fluid.lower.rho0", "1", "lower interface density rho0-; rho0+ = P+^-1(P-(rho0-))"},
        {"fluid.upper.law", "polytropic", "upper pressure law: polytropic or tabulated"},
        {"fluid.upper.K", "1", "upper polytropic scale K+ > 0"},
        {"fluid.upper.gamma", "1", "upper adiabatic exponent gamma+ >= 1"},
        {"fluid.upper.table", nullptr, "upper table CSV with header rho,P (law = tabulated)"},
        {"geometry.m", "1", "depth of the lower layer, slab (-m, 0)"},
        {"geometry.ell", "1", "height of the upper layer, slab (0, ell)"},
        {"geometry.g", "1", "gravitational acceleration g > 0"},
        {"geometry.sigma", "0.1", "surface tension sigma >= 0; xi_c = sqrt(g [[rho0]] / sigma)"},
        {"geometry.L", nullptr, "horizontal period 2 pi L (periodic case)"},
        {"viscosity.lower.eps", "0.1", "shear viscosity eps(rho) = eps rho^eps_power, lower"},
        {"viscosity.lower.eps_power", "0", "power in the lower shear viscosity"},
        {"viscosity.lower.delta", "0", "bulk viscosity delta(rho) = delta rho^delta_power, lower"},
        {"viscosity.lower.delta_power", "0", "power in the lower bulk viscosity"},
        {"viscosity.upper.eps", "0.1", "shear viscosity, upper"},
        {"viscosity.upper.eps_power", "0", "power in the upper shear viscosity"},
        {"viscosity.upper.delta", "0", "bulk viscosity, upper"},
        {"viscosity.upper.delta_power", "0", "power in the upper bulk viscosity"},
        {"mesh.elements", "256", "elements per side"},
        {"mesh.order", "2", "element order, 1 or 2"},
        {"mesh.quad", "3", "Gauss points per element"},
        {"solver.fp_tol", "1e-9", "fixed-point tolerance on s - sqrt(-mu(s))"},
        {"solver.s_lo", "1e-8", "lower end of the fixed-point bracket"},
        {"solver.max_doublings", "60", "bracket doublings before a solver error"},
        {"solver.max_iterations", "500", "eigensolver iteration cap"},
        {"solver.tolerance", "1e-11", "eigensolver tolerance on eigenvalue increments"},
        {"sweep.n", "48", "log-spaced samples for dispersion"},
        {"sweep.xi_min", nullptr, "smallest |xi| (default 0.02 xi_c)"},
        {"sweep.xi_max", nullptr, "largest |xi| (default 0.98 xi_c; required if sigma = 0)"},
        {"lattice.L", "1", "period scale for lattice enumeration of (Z / L)^2"},
        {"lattice.xi_max", nullptr, "cap on lattice |xi| (required if sigma = 0)"},
        {"synthesis.f.a", nullptr, "bump support start (default 0.3 xi_c)"},
        {"synthesis.f.b", nullptr, "bump support end (default 0.7 xi_c)"},
        {"synthesis.f.amp", "1", "bump amplitude"},
        {"synthesis.radial", "16", "Gauss-Legendre radial nodes over supp f"},
        {"synthesis.angular", "64", "trapezoid angles (even)"},
        {"synthesis.extent", "5", "horizontal half-width of the sampling box"},
        {"evolution.xi", nullptr, "frequency for evolve (default: argmax of the sweep)"},
        {"evolution.T", nullptr, "horizon (default 5 / lambda)"},
        {"evolution.dt", nullptr, "step (default min(1e-3, 1e-3 / lambda))"},
        {"evolution.seed", nullptr, "random initial data seed; unset starts from the growing mode"},
        {"periodic.L", "0.3", "period scale for the stability check, L <= sqrt(sigma / (g [[rho0]]))"},
        {"periodic.T", "50", "horizon for the stability check"},
        {"periodic.modes", "8", "number of smallest lattice modes with data"},
        {"periodic.seed", "1", "seed for the stability data"},
        {"periodic.dt", "1e-2", "step for the stability check"},
        {"output.dir", "out", "directory for CSV artifacts and run.meta"},
    };
    return keys;
}

namespace {

const KeyInfo* find_key(const std::string& key) {
    for (const auto& k : config_keys())
        if (key == k.key) return &k;
    return nullptr;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

RunConfig RunConfig::defaults() {
    RunConfig c;
    for (const auto& k : config_keys())
        if (k.default_value) c.values_[k.key] = k.default_value;
    return c;
}

RunConfig RunConfig::parse(std::istream& in, const std::string& source) {
    RunConfig c = defaults();
    std::string line;
    int no = 0;
    while (std::getline(in, line)) {
        ++no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(source + ":" + std::to_string(no) + ": expected key = value");
        std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
        if (!find_key(key))
            throw ConfigError(source + ":" + std::to_string(no) + ": unknown key '" + key + "'");
        c.values_[key] = val;
    }
    return c;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    RunConfig c = parse(in, path.string());
    c.base_dir_ = path.parent_path();
    return c;
}

void RunConfig::set(const std::string& key, const std::string& value) {
    if (!find_key(key)) throw ConfigError("unknown key '" + key + "'");
    values_[key] = value;
}

void RunConfig::set_override(const std::string& assignment) {
    auto eq = assignment.find('=');
    if (eq == std::string::npos) throw ConfigError("override must be key=value: " + assignment);
    set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

bool RunConfig::has(const std::string& key) const {
    auto it = values_.find(key);
    return it != values_.end() && !it->second.empty();
}

std::string RunConfig::str(const std::string& key) const {
    if (!find_key(key)) throw ConfigError("unknown key '" + key + "'");
    auto it = values_.find(key);
    if (it == values_.end() || it->second.empty()) throw ConfigError(key + " is not set");
    return it->second;
}

double RunConfig::num(const std::string& key) const {
    const std::string s = str(key);
    std::size_t pos = 0;
    double v;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw ConfigError(key + " must be a number, got '" + s + "'");
    }
    if (pos != s.size() || !std::isfinite(v))
        throw ConfigError(key + " must be a finite number, got '" + s + "'");
    return v;
}

int RunConfig::integer(const std::string& key) const {
    double v = num(key);
    if (v != std::floor(v) || std::abs(v) > 1e9) throw ConfigError(key + " must be an integer");
    return static_cast<int>(v);
}

std::optional<double> RunConfig::opt_num(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    return num(key);
}

std::string RunConfig::canonical() const {
    std::ostringstream os;
    for (const auto& [k, v] : values_)
        if (!v.empty()) os << k << " = " << v << "\n";
    return os.str();
}

std::uint64_t RunConfig::hash() const {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : canonical()) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

PressureLaw RunConfig::pressure_law(Side side) const {
    const std::string p = side == Side::lower ? "fluid.lower." : "fluid.upper.";
    const std::string law = str(p + "law");
    if (law == "polytropic") {
        try {
            return PressureLaw::polytropic(num(p + "K"), num(p + "gamma"));
        } catch (const ConfigError& e) {
            throw ConfigError(p + "K/" + p + "gamma: " + e.what());
        }
    }
    if (law == "tabulated") {
        std::filesystem::path t = str(p + "table");
        if (t.is_relative() && !base_dir_.empty() && !std::filesystem::exists(t))
            t = base_dir_ / t;
        try {
            return PressureLaw::from_csv(t.string());
        } catch (const Error& e) {
            throw ConfigError(p + "table: " + e.what());
        }
    }
    throw ConfigError(p + "law must be polytropic or tabulated, got '" + law + "'");
}

ViscosityLaw RunConfig::viscosity(Side side) const {
    const std::string p = side == Side::lower ? "viscosity.lower." : "viscosity.upper.";
    ViscosityLaw v{num(p + "eps"), num(p + "eps_power"), num(p + "delta"), num(p + "delta_power")};
    if (!(v.eps_c > 0.0)) throw ConfigError(p + "eps must be > 0");
    if (!(v.delta_c >= 0.0)) throw ConfigError(p + "delta must be >= 0");
    return v;
}

SlabGeometry RunConfig::geometry() const {
    SlabGeometry g;
    g.m = num("geometry.m");
    g.ell = num("geometry.ell");
    g.g = num("geometry.g");
    g.sigma = num("geometry.sigma");
    g.L = opt_num("geometry.L");
    g.validate();
    return g;
}

SteadyProfile RunConfig::profile() const {
    return build_profile(pressure_law(Side::lower), pressure_law(Side::upper),
                         num("fluid.lower.rho0"), geometry(), viscosity(Side::lower),
                         viscosity(Side::upper));
}

Mesh RunConfig::mesh(int elements) const {
    const int n = elements > 0 ? elements : integer("mesh.elements");
    const int order = integer("mesh.order"), quad = integer("mesh.quad");
    if (n < 1) throw ConfigError("mesh.elements must be >= 1");
    if (order != 1 && order != 2) throw ConfigError("mesh.order must be 1 or 2");
    if (quad < order + 1) throw ConfigError("mesh.quad must be >= mesh.order + 1");
    const SlabGeometry g = geometry();
    return Mesh::uniform(g.m, g.ell, n, n, order, quad);
}

GrowthOptions RunConfig::growth_options() const {
    GrowthOptions o;
    o.fp_tol = num("solver.fp_tol");
    o.s_lo = num("solver.s_lo");
    o.max_doublings = integer("solver.max_doublings");
    o.eig.max_iterations = integer("solver.max_iterations");
    o.eig.tolerance = num("solver.tolerance");
    if (!(o.fp_tol > 0.0)) throw ConfigError("solver.fp_tol must be > 0");
    if (!(o.s_lo > 0.0)) throw ConfigError("solver.s_lo must be > 0");
    if (o.max_doublings < 1) throw ConfigError("solver.max_doublings must be >= 1");
    if (o.eig.max_iterations < 1) throw ConfigError("solver.max_iterations must be >= 1");
    if (!(o.eig.tolerance > 0.0)) throw ConfigError("solver.tolerance must be > 0");
    return o;
}

void RunConfig::validate() const {
    const SteadyProfile p = profile();
    mesh();
    growth_options();
    auto positive = [&](const char* k) {
        if (has(k) && !(num(k) > 0.0)) throw ConfigError(std::string(k) + " must be > 0");
    };
    for (const char* k : {"sweep.xi_min", "sweep.xi_max", "lattice.L", "lattice.xi_max",
                          "synthesis.f.amp", "synthesis.extent", "evolution.xi", "evolution.T",
                          "evolution.dt", "periodic.L", "periodic.T", "periodic.dt"})
        positive(k);
    if (integer("sweep.n") < 1) throw ConfigError("sweep.n must be >= 1");
    if (has("sweep.xi_min") && has("sweep.xi_max") && !(num("sweep.xi_min") < num("sweep.xi_max")))
        throw ConfigError("sweep.xi_min must be < sweep.xi_max");
    if (p.geometry().sigma == 0.0 && !has("sweep.xi_max"))
        throw ConfigError("sweep.xi_max is required when geometry.sigma = 0");
    if (integer("synthesis.radial") < 1) throw ConfigError("synthesis.radial must be >= 1");
    const int na = integer("synthesis.angular");
    if (na < 2 || na % 2) throw ConfigError("synthesis.angular must be even and >= 2");
    if (integer("periodic.modes") < 1) throw ConfigError("periodic.modes must be >= 1");
    if (has("evolution.seed")) integer("evolution.seed");
    integer("periodic.seed");
}

}  // namespace rtg
