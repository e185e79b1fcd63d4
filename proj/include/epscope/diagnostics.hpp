#pragma once

#include <cstddef>
#include <vector>

#include "epscope/eigen.hpp"

namespace epscope {

/// Expansion of one eigenstate over the unperturbed basis, b_ij = Phi_i,j.
///
/// `state` is the unperturbed basis index the eigenpair is attributed to:
/// pairs and basis states are matched greedily, largest |b_ij|^2 first, so
/// each row's b_ii is its dominant component wherever that is unambiguous.
/// `pair` is the index of the eigenpair in the EigenSet.
///
/// delta = |b_ii|^2 - max_{j != i} |b_ij|^2. For two levels this is the
/// usual purity difference |b_ii|^2 - |b_ij|^2; for more levels it is an
/// extension (the largest competing component).
struct MixingRow {
    std::size_t state = 0;
    std::size_t pair = 0;
    std::vector<cplx> coefficients;
    std::vector<double> abs2;
    double delta = 0.0;
};

/// Matches eigenpairs to basis states (greedy on |vector component|^2).
/// Returns assignment[state] = pair index. Works on degenerate sets too.
std::vector<std::size_t> assign_states(const EigenSet& set);

/// One row per basis state, ordered by state index.
std::vector<MixingRow> mixing(const EigenSet& set);

/// MixingRow for a single vector attributed to basis state `state`.
MixingRow mixing_row(std::span<const cplx> vector, std::size_t state, std::size_t pair = 0);

/// delta per basis state (same order as mixing()).
std::vector<double> delta_at(const EigenSet& set);

/// Bi-orthogonality measures in eigenpair order:
///   A_i  = <Phi_i|Phi_i>     (>= 1)
///   B_ij = |<Phi_i|Phi_j>|   (>= 0, i != j)
/// plus the defects of the structural relations that hold for two levels:
/// <Phi_i|Phi_i> real and equal for both states, <Phi_i|Phi_j> purely
/// imaginary and antisymmetric.
struct BiorthMeasures {
    std::vector<double> A;
    std::vector<std::vector<double>> B; // symmetric, zero diagonal
    std::vector<std::vector<cplx>> overlaps; // raw <Phi_i|Phi_j>
    double self_imag_defect = 0.0;     // max |Im <Phi_i|Phi_i>|
    double cross_real_defect = 0.0;    // max |Re <Phi_i|Phi_j>|, i != j
    double antisymmetry_defect = 0.0;  // max |<Phi_i|Phi_j> + <Phi_j|Phi_i>|
    double equal_norm_defect = 0.0;    // max |A_i - A_j|
};

BiorthMeasures biorth_measures(const EigenSet& set);

/// Distance from the branch-point relation Phi_1 = +-i Phi_2 for a two-level
/// set: min over the sign of ||u_1 -+ i u_2|| / ||u_1||, with u the vectors
/// rescaled to unit conjugated norm (phases kept). Goes to zero approaching
/// a branch point. Returns 1 for an uncoupled set (both vectors pure basis
/// states) where the relation has no meaning.
double ep_vector_relation(const EigenSet& set);

} // namespace epscope
