#pragma once

#include <functional>
#include <vector>

namespace rtg {

struct GaussRule {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;
};

// n-point Gauss-Legendre rule, n >= 1.
GaussRule gauss_legendre(int n);

// Adaptive Gauss-Kronrod (7/15) on [a, b] to |err| <= rtol * |I| + atol.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rtol = 1e-12, double atol = 1e-300);

}  // namespace rtg
