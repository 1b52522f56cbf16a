#pragma once

#include <string>
#include <utility>
#include <vector>

namespace rtg {

// Barotropic pressure law P(rho). Polytropic K rho^gamma or a monotone cubic
// through tabulated (rho, P) samples. Enthalpy is h(rho) = int_1^rho P'(r)/r dr;
// for tables whose range excludes 1 the base point is the first sample.
class PressureLaw {
public:
    enum class Kind { polytropic, tabulated };

    static PressureLaw polytropic(double K, double gamma);
    static PressureLaw tabulated(std::vector<double> rho, std::vector<double> P);
    // CSV with header `rho,P`.
    static PressureLaw from_csv(const std::string& path);

    Kind kind() const { return kind_; }
    double K() const { return K_; }
    double gamma() const { return gamma_; }

    double pressure(double rho) const;
    double dpressure(double rho) const;
    double d2pressure(double rho) const;
    double enthalpy(double rho) const;
    double enthalpy_inverse(double h) const;
    double pressure_inverse(double P) const;

    // Working range of rho (open at 0 / +inf for polytropic).
    std::pair<double, double> range() const;
    bool in_range(double rho) const;
    // Image of P and h over the working range.
    std::pair<double, double> pressure_image() const;
    std::pair<double, double> enthalpy_image() const;

private:
    Kind kind_ = Kind::polytropic;
    double K_ = 1.0, gamma_ = 1.0;
    std::vector<double> rho_, P_, d_;  // knots, values, Hermite slopes
    std::vector<double> hcum_;         // enthalpy at knots
    double hbase_ = 0.0;

    std::size_t interval(double rho) const;
    void check_domain(double rho) const;
    double tab_enthalpy_piece(std::size_t i, double rho) const;
};

double pressure(const PressureLaw& law, double rho);
double enthalpy(const PressureLaw& law, double rho);
double enthalpy_inverse(const PressureLaw& law, double h);
bool admissible(const PressureLaw& lower, const PressureLaw& upper, double rho0_minus);

}  // namespace rtg
