#pragma once

#include <complex>
#include <span>
#include <vector>

#include "epscope/model.hpp"

namespace epscope::charpoly {

/// Coefficients c[0..n] of det(z I - H) in ascending powers; c[n] == 1.
///
/// Orders up to 4 use the exact expansion c[n-k] = (-1)^k E_k, with E_k
/// the sum of all k x k principal minors (each by cofactor expansion).
/// Larger orders reduce H to upper Hessenberg form by Householder
/// reflections and run the determinant recurrence on the Hessenberg matrix.
std::vector<cplx> coefficients(const ComplexMatrix& h);

/// det(H) by LU factorization with partial pivoting.
cplx determinant(ComplexMatrix h);

/// p(z) and p'(z) by Horner's rule.
struct Evaluation {
    cplx value;
    cplx derivative;
    double bound; // sum |c_k| |z|^k, the scale of rounding error in value
};
Evaluation evaluate(std::span<const cplx> coeffs, cplx z);

struct AberthOptions {
    double tolerance = 1e-13;
    int max_iterations = 200;
};

/// All roots of the polynomial by Aberth-Ehrlich simultaneous iteration.
/// Throws Error(Errc::no_convergence) when the iteration budget runs out.
std::vector<cplx> aberth_roots(std::span<const cplx> coeffs, const AberthOptions& opts = {});

} // namespace epscope::charpoly
