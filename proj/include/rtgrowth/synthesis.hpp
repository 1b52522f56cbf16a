#pragma once

#include <array>
#include <complex>
#include <vector>

#include "rtgrowth/dispersion.hpp"

namespace rtg {

// Normal mode for a 2D frequency: w(xi, x3) = (-i phi, -i theta, psi) with
// (phi, theta) the reduced phi rotated from (|xi|, 0) onto xi.
struct NormalMode3D {
    std::array<double, 2> xi{};
    double lambda = 0.0;
    double cos_a = 1.0, sin_a = 0.0;  // direction of xi
    const ModeSolution* mode = nullptr;

    // (phi, theta, psi) at height x3 on the given side
    std::array<double, 3> profile(double x3, Side side) const;
};

NormalMode3D extend_to_plane(const ModeSolution& mode, std::array<double, 2> xi);

enum class Field { eta, v, q };

// Sum over j = 0..k of (1 + |xi|^2)^(k-j) ||d3^j w||^2 over both sides for one
// reduced mode, where w is the transform coefficient of the chosen field at t = 0.
// Second x3-derivatives come from the mode equations. k <= 2 for eta and v,
// k <= 1 for q.
double mode_sobolev_density(const SteadyProfile& profile, const ModeSolution& mode, Field field,
                            int k);

struct FieldValue {
    std::array<double, 3> eta{}, v{};
    double q = 0.0;
    double imag = 0.0;  // largest imaginary part before taking the real part
};

struct Point3 {
    double x1 = 0, x2 = 0, x3 = 0;
};

// Growing mode on the 2 pi L periodic slab built from a maximizing lattice pair
// xi and -xi.
class PeriodicField {
public:
    PeriodicField(const SteadyProfile& profile, const DispersionCurve& lattice);

    FieldValue eval(const Point3& x, double t) const;
    double rate() const { return lambda_; }
    double L() const { return L_; }
    std::array<int, 2> k() const { return k_; }
    // Piecewise H^k norm from the transform side.
    double sobolev_norm(Field field, int k, double t) const;
    const ModeSolution& mode() const { return mode_; }

private:
    const SteadyProfile* profile_;
    ModeSolution mode_;
    double L_ = 0.0, lambda_ = 0.0;
    std::array<int, 2> k_{};
    NormalMode3D w_;
};

// L^2 norm over one period by direct quadrature of sampled values
// (trapezoid horizontally with n points per direction, Gauss per element vertically).
double periodic_direct_l2(const PeriodicField& field, Field which, double t, int n);

struct BumpSpec {
    double a = 0.0, b = 0.0, amp = 1.0;
    // amp exp(-1 / (1 - u^2)) on (a, b), u the affine map to (-1, 1)
    double operator()(double r) const;
};

// Default bump on [0.3, 0.7] xi_c.
BumpSpec default_bump(const SteadyProfile& profile);

struct SynthesisOptions {
    int radial = 16;
    int angular = 64;  // even
    GrowthOptions growth;
    int threads = 1;
};

// Fourier synthesis over the annulus supp(f) with Gauss-Legendre radial nodes and
// trapezoid angles.
class NonperiodicField {
public:
    NonperiodicField(const SteadyProfile& profile, const Mesh& mesh, const BumpSpec& f,
                     const SynthesisOptions& opt = {});

    FieldValue eval(const Point3& x, double t) const;
    // The same fields with the angular integral done by Bessel functions.
    FieldValue eval_bessel(const Point3& x, double t) const;
    double sobolev_norm(Field field, int k, double t) const;
    // (int (1 + |xi|^2)^(k+1) f^2 dxi)^(1/2)
    double bump_weight(int k) const;
    double lambda0() const { return lambda0_; }
    double lambda_max() const { return lambda_max_; }
    const std::vector<ModeSolution>& modes() const { return modes_; }

private:
    const SteadyProfile* profile_;
    BumpSpec f_;
    std::vector<double> r_, wr_, fr_;
    std::vector<ModeSolution> modes_;
    std::vector<double> ca_, sa_;
    double dalpha_ = 0.0;
    double lambda0_ = 0.0, lambda_max_ = 0.0;
};

struct Grid3 {
    std::array<double, 2> x1{}, x2{}, x3{};
    std::array<int, 3> n{};
    std::vector<Point3> points() const;
};

}  // namespace rtg
