#pragma once

#include <cstddef>
#include <optional>
#include <utility>

#include "epscope/model.hpp"

namespace epscope {

enum class SolveFor { omega, gamma_scale };

/// A located double pole. For two-level models omega_cr is the critical
/// coupling at the given widths; gamma_scale is the factor on both widths
/// that puts the model at the branch point for the given coupling.
struct BranchPoint {
    double a_cr = 0.0;
    std::optional<double> omega_cr;
    std::optional<double> gamma_scale;
    cplx X;            // coalesced eigenvalue
    double residual = 0.0; // |F| (two-level) or eigenvalue gap (numeric)
};

/// Branch point of a two-level model with affine energies.
///
/// F = 0 splits into Im F = -(de)(dgamma) = 0 and
/// Re F = de^2 - (dgamma/2)^2 + 4 omega^2 = 0, so a_cr solves de(a) = 0,
/// the critical coupling is |dgamma|/4 and, at fixed omega, the widths
/// must be scaled by 4 omega / |dgamma|.
///
/// Throws Errc::no_crossing for parallel energy laws and
/// Errc::degenerate_widths for equal widths when solving for omega.
BranchPoint locate_ep_2level(const ModelSpec& model, SolveFor solve_for = SolveFor::omega);

/// Which parameter the numeric search scales.
struct ScaleTarget {
    enum class Kind { widths, coupling } kind = Kind::widths;
    std::size_t k = 0; // coupling entry (k, l) for Kind::coupling, 0-based
    std::size_t l = 1;
};

/// Search box in (a, scale).
struct SearchBox {
    double a_lo = 0.0, a_hi = 1.0;
    double s_lo = 0.0, s_hi = 1.0;
};

/// H(a) with the scale applied: widths multiplied by s, or coupling entry
/// (k, l) (and its mirror) multiplied by s.
ModelSpec scaled_model(const ModelSpec& model, ScaleTarget target, double s);

/// |lambda_i - lambda_j| for the eigenpairs attributed to basis states i
/// and j. The splitting is recomputed from det(H - m) at the pair midpoint
/// m, which keeps it accurate when the two eigenvalues nearly coalesce.
double pair_gap(const ModelSpec& model, double a, std::size_t i, std::size_t j, cplx* midpoint = nullptr);

struct NumericSearchOptions {
    int grid = 5;             // Nelder-Mead restarts on a grid x grid lattice in the box
    int max_evaluations = 4000;
    int polish_rounds = 40;
};

/// Branch point of basis states (i, j) in the box: Nelder-Mead on
/// gap(a, s) restarted from a 5 x 5 lattice, then alternating bisection
/// polish on each coordinate. Accepted when the gap is <= 1e-8 ||H||_F.
///
/// Throws Errc::gap_floor_not_reached when the best gap stays above the
/// floor (an avoided crossing), Errc::not_bracketed when the minimum lies
/// on the box boundary.
BranchPoint locate_ep_numeric(const ModelSpec& model, std::pair<std::size_t, std::size_t> states,
                              SearchBox box, ScaleTarget target, const NumericSearchOptions& opts = {});

} // namespace epscope
