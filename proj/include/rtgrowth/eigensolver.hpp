#pragma once

#include <optional>

#include "rtgrowth/banded.hpp"
#include "rtgrowth/forms.hpp"

namespace rtg {

struct EigenResult {
    double mu = 0.0;
    Vec minimizer;          // x^T J x = 1
    double residual = 0.0;  // ||A x - mu J x|| / ||x||
    int iterations = 0;
};

struct EigenOptions {
    int max_iterations = 500;
    double tolerance = 1e-11;       // on eigenvalue increments
    std::optional<double> hint;     // guess for mu, used to place the shift
};

// Smallest eigenpair of the symmetric-definite pencil (A, B) by shift-invert
// Lanczos in the B inner product. `lower_bound` must not exceed the smallest
// eigenvalue; the shift is placed below it so A - shift B is SPD.
EigenResult smallest_pencil(const SymBand& A, const SymBand& B, double lower_bound,
                            const EigenOptions& opt = {});

// Inverse iteration with a banded LU at a shift just below mu; tightens the
// eigenvector well beyond the Lanczos stopping tolerance.
void polish_eigenvector(const SymBand& A, const SymBand& B, double mu, Vec& x, int steps = 2);

// mu(s): smallest eigenvalue of (E0 + s E1, J).
EigenResult smallest_eig(const FormSet& forms, double s, const EigenOptions& opt = {});

// Smallest eigenvalue of (E1, J).
double c2_diagnostic(const FormSet& forms);

}  // namespace rtg
