#pragma once

#include <complex>
#include <span>
#include <vector>

#include "epscope/model.hpp"

namespace epscope {

/// |F| below this marks a two-level set as sitting on the branch point.
inline constexpr double kDiscriminantFloor = 1e-12;
/// Relative (to ||H||_F) eigenvalue gap below which a general set is degenerate.
inline constexpr double kRelativeGapFloor = 1e-8;
/// ||x||^2 / |x^T x| above which the general solver treats a set as
/// degenerate: the unconjugated Gram identity can then no longer hold to
/// 1e-10 in double precision.
inline constexpr double kMaxGramCondition = 1e6;
/// Matrix order accepted by the general solver.
inline constexpr std::size_t kMaxGeneralOrder = 16;

/// One eigenvalue lambda = E - (i/2) Gamma and its right eigenvector. For a
/// complex-symmetric H the left eigenvector is conj(vector), so only the
/// right one is kept.
struct EigenPair {
    cplx value;
    std::vector<cplx> vector;
    double residual = 0.0; // ||H x - lambda x|| for the unit (conjugated) direction x

    double energy() const noexcept { return value.real(); }
    double gamma() const noexcept { return -2.0 * value.imag(); }
};

/// All eigenpairs of one matrix.
///
/// When `degenerate` is set the set sits on (or numerically at) a branch
/// point: the eigenvalues are returned but the vectors are only unit
/// (conjugated-norm) directions and cannot be bi-orthonormalized.
struct EigenSet {
    std::vector<EigenPair> pairs;
    double gram_condition = 1.0; // max_i ||x_i||^2 / |x_i^T x_i|
    double matrix_norm = 0.0;
    bool degenerate = false;
    bool normalized = false;

    std::size_t size() const noexcept { return pairs.size(); }
};

/// Principal square root with Re >= 0; on the imaginary axis the root with
/// Im >= 0 is returned regardless of the sign of zero.
cplx principal_sqrt(cplx z) noexcept;

/// Unconjugated product sum_k x_k y_k.
cplx bilinear(std::span<const cplx> x, std::span<const cplx> y) noexcept;
/// Conjugated product sum_k conj(x_k) y_k.
cplx inner(std::span<const cplx> x, std::span<const cplx> y) noexcept;

/// F(a, omega) = (eps_1 - eps_2)^2 + 4 omega^2 for a two-level model.
cplx discriminant(const ModelSpec& model, double a);

/// Closed-form two-level solution. pairs[0] is the "+" root
/// (eps_1 + eps_2)/2 + sqrt(F)/2, pairs[1] the "-" root. At |F| below
/// kDiscriminantFloor both values are X = (eps_1 + eps_2)/2 and the set is
/// returned with `degenerate` set.
EigenSet eigen2_analytic(const ModelSpec& model, double a);

/// Dense solver for orders up to kMaxGeneralOrder: characteristic
/// polynomial, Aberth-Ehrlich roots, inverse iteration for the vectors.
/// Pairs come back sorted by ascending real part, ties by imaginary part.
/// Throws Errc::no_convergence; degenerate input is flagged, not thrown.
EigenSet eigen_general(const ComplexMatrix& h);

/// Scales every vector to x^T x = 1 and fixes the sign so that the
/// largest-magnitude component has argument in (-pi/2, pi/2].
/// Throws Errc::degenerate_at_ep on degenerate sets.
EigenSet biorthonormalize(EigenSet set);

/// Eigen-decomposition of H(a): analytic for two levels, general otherwise.
EigenSet solve(const ModelSpec& model, double a);

} // namespace epscope
