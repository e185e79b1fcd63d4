#pragma once

#include <cstddef>
#include <vector>

#include "epscope/diagnostics.hpp"
#include "epscope/eigen.hpp"
#include "epscope/model.hpp"

namespace epscope {

/// Uniform grid over [a_min, a_max] with `steps` points, plus optional
/// pinned points (e.g. a known crossing). Adaptive refinement may insert
/// midpoints down to `min_step`; it never removes points.
struct SweepGrid {
    double a_min = 0.0;
    double a_max = 1.0;
    std::size_t steps = 2;
    bool adaptive = true;
    double min_step = 1e-9;
    std::vector<double> pinned;
};

void validate(const SweepGrid& grid);

/// Sorted, duplicate-free grid points (uniform points plus pinned points in range).
std::vector<double> grid_points(const SweepGrid& grid);

struct TrajectoryPoint {
    double a = 0.0;
    EigenPair pair;
    MixingRow mixing;       // NaN coefficients at a degenerate point
    double A = 1.0;         // <Phi|Phi>, infinite at a degenerate point
    std::vector<double> B;  // |<Phi|Phi_u>| against every trajectory u (0 for u == self)
    bool degenerate = false;
};

/// One continuity-tracked eigenvalue branch. Trajectory t starts on the
/// eigenpair attributed to unperturbed state t at the first grid point.
struct Trajectory {
    std::size_t label = 0;
    std::vector<TrajectoryPoint> points;
};

struct SweepOptions {
    double continuity_threshold = 0.5; // minimum |x_prev^T x_next| of an accepted step
    unsigned workers = 1;              // threads for the initial grid solves
};

/// Solves H(a) on the grid and links eigenpairs across points by greedy
/// matching on |unconjugated overlap| with the previous point. Steps whose
/// matched overlap drops below the continuity threshold are bisected (when
/// adaptive) until they pass or reach min_step, which raises
/// Errc::tracking_ambiguity. Output does not depend on `workers`.
std::vector<Trajectory> run_sweep(const ModelSpec& model, const SweepGrid& grid,
                                  const SweepOptions& options = {});

enum class CrossingMode { free_cross, avoided };

struct CrossingReport {
    double a_star = 0.0;          // grid point of closest approach |lambda_t - lambda_u|
    double energy_gap_min = 0.0;  // min |E_t - E_u| in the window
    double width_gap_min = 0.0;   // min |Gamma_t/2 - Gamma_u/2| in the window
    CrossingMode energy_mode = CrossingMode::avoided;
    CrossingMode width_mode = CrossingMode::avoided;
    bool exchange = false;
    double ep_proximity = 0.0;    // |lambda_t - lambda_u| at a_star
};

struct CrossingWindow {
    double a_lo = 0.0;
    double a_hi = 0.0;
};

/// Classifies the approach of trajectories t and u inside the window.
///
/// A mode is free-cross when the signed difference (E_t - E_u, resp.
/// Gamma_t - Gamma_u) has opposite signs at the window edges, or is below
/// `tolerance` at both edges (the quantities coincide, e.g. zero widths).
/// exchange is set when the dominant basis state of trajectory t differs
/// between the edges. Throws Errc::window_too_narrow when the closest
/// approach sits on the window boundary.
CrossingReport classify_crossing(const std::vector<Trajectory>& trajectories, CrossingWindow window,
                                 std::size_t t = 0, std::size_t u = 1, double tolerance = 1e-8);

const char* to_string(CrossingMode mode) noexcept;

} // namespace epscope
