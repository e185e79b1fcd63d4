#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace epscope {

using cplx = std::complex<double>;

/// Affine energy law e(a) = intercept + slope * a.
struct EnergyLaw {
    double intercept = 0.0;
    double slope = 0.0;

    double operator()(double a) const noexcept { return intercept + slope * a; }
};

/// One unperturbed level. `gamma` is the full width; config files and CSV
/// columns carry gamma/2 under the name gamma_half.
struct LevelSpec {
    EnergyLaw energy;
    double gamma = 0.0;
};

/// Dense square matrix of doubles, row-major.
class RealMatrix {
public:
    RealMatrix() = default;
    explicit RealMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

    std::size_t order() const noexcept { return n_; }
    double& operator()(std::size_t r, std::size_t c) { return data_[r * n_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * n_ + c]; }

private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

/// Dense square complex matrix, row-major.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(std::size_t n) : n_(n), data_(n * n, cplx{}) {}

    std::size_t order() const noexcept { return n_; }
    cplx& operator()(std::size_t r, std::size_t c) { return data_[r * n_ + c]; }
    const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * n_ + c]; }

    /// Frobenius norm.
    double norm() const;
    bool is_symmetric() const;

private:
    std::size_t n_ = 0;
    std::vector<cplx> data_;
};

/// A parametrized family of complex-symmetric Hamiltonians
///
///     H(a)_kk = e_k(a) - (i/2) gamma_k,    H(a)_kl = -omega_kl  (k != l).
///
/// The coupling matrix is real, symmetric and has a zero diagonal.
struct ModelSpec {
    std::vector<LevelSpec> levels;
    RealMatrix coupling;

    std::size_t size() const noexcept { return levels.size(); }
};

/// Throws Error(Errc::invalid_model) naming the offending field.
void validate(const ModelSpec& model);

/// Two levels with widths given as gamma/2, the convention of the figure
/// captions.
ModelSpec two_level(EnergyLaw e1, EnergyLaw e2, double gamma_half1, double gamma_half2,
                    double omega);

/// N levels with a uniform coupling on every off-diagonal entry.
ModelSpec uniform_coupling(std::vector<LevelSpec> levels, double omega);

ComplexMatrix build_matrix(const ModelSpec& model, double a);

/// Diagonal of the uncoupled matrix, eps_j = e_j(a) - (i/2) gamma_j. The
/// matching basis states are the canonical unit vectors.
std::vector<cplx> unperturbed_spectrum(const ModelSpec& model, double a);

/// The two-level model all two-state figures are built on: e1 = 1 - a/2,
/// e2 = a, omega = 0.05 and gamma_2 = 1.1 gamma_1.
ModelSpec reference_two_level(double gamma_half1, double omega = 0.05);

} // namespace epscope
