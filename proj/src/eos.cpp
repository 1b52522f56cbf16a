#include "rtgrowth/eos.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "rtgrowth/errors.hpp"
#include "rtgrowth/quadrature.hpp"

namespace rtg {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSlopeFloor = 1e-10;  // relative to the secant slope
}  // namespace

PressureLaw PressureLaw::polytropic(double K, double gamma) {
    if (!(K > 0.0) || !std::isfinite(K)) throw ConfigError("polytropic law: K must be > 0");
    if (!(gamma >= 1.0) || !std::isfinite(gamma))
        throw ConfigError("polytropic law: gamma must be >= 1");
    PressureLaw law;
    law.kind_ = Kind::polytropic;
    law.K_ = K;
    law.gamma_ = gamma;
    return law;
}

PressureLaw PressureLaw::tabulated(std::vector<double> rho, std::vector<double> P) {
    const std::size_t n = rho.size();
    if (n < 2 || P.size() != n) throw ConfigError("tabulated law: need >= 2 (rho, P) pairs");
    for (std::size_t i = 0; i < n; ++i) {
        if (!(rho[i] > 0.0) || !(P[i] > 0.0))
            throw ConfigError("tabulated law: rho and P must be positive");
        if (i > 0 && !(rho[i] > rho[i - 1] && P[i] > P[i - 1]))
            throw ConfigError("tabulated law: samples must be strictly increasing");
    }
    PressureLaw law;
    law.kind_ = Kind::tabulated;
    law.rho_ = std::move(rho);
    law.P_ = std::move(P);

    // Fritsch-Butland slopes, one-sided secants at the ends.
    std::vector<double> h(n - 1), del(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = law.rho_[i + 1] - law.rho_[i];
        del[i] = (law.P_[i + 1] - law.P_[i]) / h[i];
    }
    std::vector<double>& d = law.d_;
    d.assign(n, 0.0);
    d[0] = del[0];
    d[n - 1] = del[n - 2];
    for (std::size_t k = 1; k + 1 < n; ++k) {
        double w1 = 2.0 * h[k] + h[k - 1];
        double w2 = h[k] + 2.0 * h[k - 1];
        d[k] = (w1 + w2) / (w1 / del[k - 1] + w2 / del[k]);
    }
    // Shrink slopes until every piece has P' above the floor.
    for (int pass = 0; pass < 400; ++pass) {
        bool ok = true;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            double a = d[i] / del[i], b = d[i + 1] / del[i];
            // P'/del as a quadratic in t: c0 + c1 t + c2 t^2
            double c0 = a, c1 = -4.0 * a - 2.0 * b + 6.0, c2 = 3.0 * a + 3.0 * b - 6.0;
            double mn = std::min(c0, c0 + c1 + c2);
            if (c2 > 0.0) {
                double tv = -c1 / (2.0 * c2);
                if (tv > 0.0 && tv < 1.0) mn = std::min(mn, c0 + c1 * tv + c2 * tv * tv);
            }
            if (mn <= kSlopeFloor) {
                ok = false;
                d[i] *= 0.9;
                d[i + 1] *= 0.9;
            }
        }
        if (ok) break;
        if (pass == 399) throw ConfigError("tabulated law: cannot enforce P' > 0");
    }

    law.hcum_.assign(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i)
        law.hcum_[i + 1] = law.hcum_[i] + law.tab_enthalpy_piece(i, law.rho_[i + 1]);
    law.hbase_ = 0.0;
    if (law.in_range(1.0)) {
        std::size_t i = law.interval(1.0);
        law.hbase_ = law.hcum_[i] + law.tab_enthalpy_piece(i, 1.0);
    }
    return law;
}

PressureLaw PressureLaw::from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open pressure table '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("empty pressure table '" + path + "'");
    line.erase(std::remove_if(line.begin(), line.end(), ::isspace), line.end());
    if (line != "rho,P") throw ConfigError("pressure table '" + path + "' must have header rho,P");
    std::vector<double> rho, P;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        double r, p;
        if (!(ss >> r >> p)) throw ConfigError("bad row in pressure table '" + path + "': " + line);
        rho.push_back(r);
        P.push_back(p);
    }
    return tabulated(std::move(rho), std::move(P));
}

std::pair<double, double> PressureLaw::range() const {
    if (kind_ == Kind::polytropic) return {0.0, kInf};
    return {rho_.front(), rho_.back()};
}

bool PressureLaw::in_range(double rho) const {
    if (kind_ == Kind::polytropic) return rho > 0.0 && rho < kInf;
    return rho >= rho_.front() && rho <= rho_.back();
}

void PressureLaw::check_domain(double rho) const {
    if (!(rho > 0.0)) throw DomainError("density must be > 0");
    if (!in_range(rho)) throw DomainError("density outside tabulated range");
}

std::size_t PressureLaw::interval(double rho) const {
    auto it = std::upper_bound(rho_.begin(), rho_.end(), rho);
    std::size_t i = static_cast<std::size_t>(it - rho_.begin());
    if (i == 0) return 0;
    return std::min(i - 1, rho_.size() - 2);
}

double PressureLaw::pressure(double rho) const {
    check_domain(rho);
    if (kind_ == Kind::polytropic) return K_ * std::pow(rho, gamma_);
    std::size_t i = interval(rho);
    double H = rho_[i + 1] - rho_[i], t = (rho - rho_[i]) / H;
    double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * P_[i] + (t3 - 2 * t2 + t) * H * d_[i] +
           (-2 * t3 + 3 * t2) * P_[i + 1] + (t3 - t2) * H * d_[i + 1];
}

double PressureLaw::dpressure(double rho) const {
    check_domain(rho);
    if (kind_ == Kind::polytropic) return K_ * gamma_ * std::pow(rho, gamma_ - 1.0);
    std::size_t i = interval(rho);
    double H = rho_[i + 1] - rho_[i], t = (rho - rho_[i]) / H;
    double t2 = t * t;
    return ((6 * t2 - 6 * t) * P_[i] + (3 * t2 - 4 * t + 1) * H * d_[i] +
            (-6 * t2 + 6 * t) * P_[i + 1] + (3 * t2 - 2 * t) * H * d_[i + 1]) /
           H;
}

double PressureLaw::d2pressure(double rho) const {
    check_domain(rho);
    if (kind_ == Kind::polytropic) {
        if (gamma_ == 1.0) return 0.0;
        return K_ * gamma_ * (gamma_ - 1.0) * std::pow(rho, gamma_ - 2.0);
    }
    std::size_t i = interval(rho);
    double H = rho_[i + 1] - rho_[i], t = (rho - rho_[i]) / H;
    return ((12 * t - 6) * P_[i] + (6 * t - 4) * H * d_[i] + (-12 * t + 6) * P_[i + 1] +
            (6 * t - 2) * H * d_[i + 1]) /
           (H * H);
}

double PressureLaw::tab_enthalpy_piece(std::size_t i, double rho) const {
    double a = rho_[i];
    if (rho == a) return 0.0;
    double H = rho_[i + 1] - rho_[i];
    auto f = [&](double r) {
        double t = (r - a) / H, t2 = t * t;
        double dp = ((6 * t2 - 6 * t) * P_[i] + (3 * t2 - 4 * t + 1) * H * d_[i] +
                     (-6 * t2 + 6 * t) * P_[i + 1] + (3 * t2 - 2 * t) * H * d_[i + 1]) /
                    H;
        return dp / r;
    };
    return integrate_adaptive(f, a, rho, 1e-13);
}

double PressureLaw::enthalpy(double rho) const {
    check_domain(rho);
    if (kind_ == Kind::polytropic) {
        if (gamma_ == 1.0) return K_ * std::log(rho);
        return K_ * gamma_ / (gamma_ - 1.0) * (std::pow(rho, gamma_ - 1.0) - 1.0);
    }
    std::size_t i = interval(rho);
    return hcum_[i] + tab_enthalpy_piece(i, rho) - hbase_;
}

std::pair<double, double> PressureLaw::enthalpy_image() const {
    if (kind_ == Kind::polytropic) {
        if (gamma_ == 1.0) return {-kInf, kInf};
        return {-K_ * gamma_ / (gamma_ - 1.0), kInf};
    }
    return {hcum_.front() - hbase_, hcum_.back() - hbase_};
}

std::pair<double, double> PressureLaw::pressure_image() const {
    if (kind_ == Kind::polytropic) return {0.0, kInf};
    return {P_.front(), P_.back()};
}

double PressureLaw::enthalpy_inverse(double h) const {
    if (!std::isfinite(h)) throw RangeError("enthalpy must be finite");
    if (kind_ == Kind::polytropic) {
        double rho;
        if (gamma_ == 1.0) {
            rho = std::exp(h / K_);
        } else {
            double base = 1.0 + h * (gamma_ - 1.0) / (K_ * gamma_);
            if (!(base > 0.0)) throw RangeError("enthalpy outside image (vacuum)");
            rho = std::pow(base, 1.0 / (gamma_ - 1.0));
        }
        if (!(rho > 0.0) || !std::isfinite(rho)) throw RangeError("enthalpy outside image");
        return rho;
    }
    auto [lo_h, hi_h] = enthalpy_image();
    double tol = 1e-11 * (1.0 + std::abs(h));
    if (h < lo_h - tol || h > hi_h + tol) throw RangeError("enthalpy outside tabulated image");
    std::size_t i = 0;
    while (i + 2 < rho_.size() && hcum_[i + 1] - hbase_ < h) ++i;
    double a = rho_[i], b = rho_[i + 1];
    for (int it = 0; it < 200; ++it) {
        double m = 0.5 * (a + b);
        double hm = enthalpy(m);
        if (std::abs(hm - h) <= 0.01 * tol || b - a <= 1e-16 * b) return m;
        if (hm < h)
            a = m;
        else
            b = m;
    }
    return 0.5 * (a + b);
}

double PressureLaw::pressure_inverse(double P) const {
    if (!(P > 0.0) || !std::isfinite(P)) throw RangeError("pressure must be positive and finite");
    if (kind_ == Kind::polytropic) return std::pow(P / K_, 1.0 / gamma_);
    if (P < P_.front() || P > P_.back()) throw RangeError("pressure outside tabulated image");
    std::size_t i = 0;
    while (i + 2 < P_.size() && P_[i + 1] < P) ++i;
    double a = rho_[i], b = rho_[i + 1];
    for (int it = 0; it < 200 && b - a > 1e-16 * b; ++it) {
        double m = 0.5 * (a + b);
        if (pressure(m) < P)
            a = m;
        else
            b = m;
    }
    return 0.5 * (a + b);
}

double pressure(const PressureLaw& law, double rho) { return law.pressure(rho); }
double enthalpy(const PressureLaw& law, double rho) { return law.enthalpy(rho); }
double enthalpy_inverse(const PressureLaw& law, double h) { return law.enthalpy_inverse(h); }

bool admissible(const PressureLaw& lower, const PressureLaw& upper, double rho0_minus) {
    if (!(rho0_minus > 0.0)) throw DomainError("rho0- must be > 0");
    double pm = lower.pressure(rho0_minus);
    auto [lo, hi] = upper.pressure_image();
    if (!(pm > lo && pm <= hi)) return false;
    // P+ is only defined on its working range; outside it, P- > P+ is decided
    // by monotonicity of P+.
    if (upper.in_range(rho0_minus)) return pm > upper.pressure(rho0_minus);
    return rho0_minus < upper.range().first;
}

}  // namespace rtg
