#include "rtgrowth/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rtgrowth/errors.hpp"

namespace rtg {

void SlabGeometry::validate() const {
    if (!(m > 0.0) || !std::isfinite(m)) throw ConfigError("geometry.m must be > 0");
    if (!(ell > 0.0) || !std::isfinite(ell)) throw ConfigError("geometry.ell must be > 0");
    if (!(g > 0.0) || !std::isfinite(g)) throw ConfigError("geometry.g must be > 0");
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw ConfigError("geometry.sigma must be >= 0");
    if (L && !(*L > 0.0)) throw ConfigError("geometry.L must be > 0");
}

double ViscosityLaw::eps(double rho) const { return eps_c * std::pow(rho, eps_p); }
double ViscosityLaw::deps(double rho) const {
    return eps_p == 0.0 ? 0.0 : eps_c * eps_p * std::pow(rho, eps_p - 1.0);
}
double ViscosityLaw::delta(double rho) const { return delta_c * std::pow(rho, delta_p); }
double ViscosityLaw::ddelta(double rho) const {
    return delta_p == 0.0 ? 0.0 : delta_c * delta_p * std::pow(rho, delta_p - 1.0);
}
void ViscosityLaw::validate() const {
    if (!(eps_c > 0.0)) throw ConfigError("viscosity eps must be > 0");
    if (!(delta_c >= 0.0)) throw ConfigError("viscosity delta must be >= 0");
    if (!std::isfinite(eps_p) || !std::isfinite(delta_p))
        throw ConfigError("viscosity exponents must be finite");
}

SteadyProfile::SteadyProfile(PressureLaw lower, PressureLaw upper, double rho0_minus,
                             SlabGeometry geometry, ViscosityLaw visc_lower,
                             ViscosityLaw visc_upper)
    : lower_(std::move(lower)),
      upper_(std::move(upper)),
      rho_m_(rho0_minus),
      geo_(std::move(geometry)),
      vl_(visc_lower),
      vu_(visc_upper) {
    geo_.validate();
    vl_.validate();
    vu_.validate();
    if (!(rho0_minus > 0.0) || !lower_.in_range(rho0_minus))
        throw ConfigError("fluid.lower.rho0 must be positive and inside the lower law's range");
    if (!admissible(lower_, upper_, rho0_minus))
        throw ConfigError("fluid.lower.rho0 is not admissible: need P-(rho0-) > P+(rho0-)");
    double pm = lower_.pressure(rho_m_);
    rho_p_ = upper_.pressure_inverse(pm);
    if (std::abs(upper_.pressure(rho_p_) - pm) > 1e-10 * pm)
        throw ConfigError("interface pressure matching failed");
    h_m_ = lower_.enthalpy(rho_m_);
    h_p_ = upper_.enthalpy(rho_p_);

    auto check = [](const PressureLaw& law, double h, const char* side) {
        auto [lo, hi] = law.enthalpy_image();
        if (!(h > lo && h <= hi))
            throw VacuumError(side, "depth exceeds the enthalpy range of the pressure law");
        try {
            law.enthalpy_inverse(h);
        } catch (const RangeError& e) {
            throw VacuumError(side, e.what());
        }
    };
    check(lower_, h_m_ + geo_.g * geo_.m, "lower");
    check(upper_, h_p_ - geo_.g * geo_.ell, "upper");
    if (!(jump() > 0.0)) throw ConfigError("density jump must be positive");
}

double SteadyProfile::xi_c() const {
    if (geo_.sigma == 0.0) return std::numeric_limits<double>::infinity();
    return std::sqrt(geo_.g * jump() / geo_.sigma);
}

double SteadyProfile::rho0(Side s, double x3) const {
    if (s == Side::lower) {
        if (x3 == 0.0) return rho_m_;
        return lower_.enthalpy_inverse(h_m_ - geo_.g * x3);
    }
    if (x3 == 0.0) return rho_p_;
    return upper_.enthalpy_inverse(h_p_ - geo_.g * x3);
}

ProfilePoint SteadyProfile::at(Side s, double x3) const {
    const PressureLaw& law = s == Side::lower ? lower_ : upper_;
    const ViscosityLaw& v = s == Side::lower ? vl_ : vu_;
    ProfilePoint p{};
    p.rho0 = rho0(s, x3);
    p.pprime = law.dpressure(p.rho0);
    p.drho0 = -geo_.g * p.rho0 / p.pprime;
    p.prho = p.pprime * p.rho0;
    p.dprho = (law.d2pressure(p.rho0) * p.rho0 + p.pprime) * p.drho0;
    p.eps0 = v.eps(p.rho0);
    p.deps0 = v.deps(p.rho0) * p.drho0;
    p.delta0 = v.delta(p.rho0);
    p.ddelta0 = v.ddelta(p.rho0) * p.drho0;
    return p;
}

SteadyProfile build_profile(const PressureLaw& lower, const PressureLaw& upper, double rho0_minus,
                            const SlabGeometry& geometry, const ViscosityLaw& visc_lower,
                            const ViscosityLaw& visc_upper) {
    return SteadyProfile(lower, upper, rho0_minus, geometry, visc_lower, visc_upper);
}

double verify_hydrostatic(const SteadyProfile& profile, int n_check, double h_fd) {
    if (n_check < 1) throw DomainError("n_check must be >= 1");
    const auto& geo = profile.geometry();
    double worst = 0.0;
    for (Side s : {Side::lower, Side::upper}) {
        double a = s == Side::lower ? -geo.m : 0.0;
        double b = s == Side::lower ? 0.0 : geo.ell;
        const PressureLaw& law = profile.law(s);
        for (int i = 0; i < n_check; ++i) {
            double x = a + (b - a) * (i + 1.0) / (n_check + 1.0);
            double xp = std::min(x + h_fd, b), xm = std::max(x - h_fd, a);
            double dP = (law.pressure(profile.rho0(s, xp)) - law.pressure(profile.rho0(s, xm))) /
                        (xp - xm);
            worst = std::max(worst, std::abs(dP + geo.g * profile.rho0(s, x)));
        }
    }
    return worst;
}

}  // namespace rtg
