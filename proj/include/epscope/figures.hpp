#pragma once

#include <string>
#include <vector>

#include "epscope/model.hpp"
#include "epscope/output.hpp"
#include "epscope/sweep.hpp"

namespace epscope {

/// One dataset of a figure reproduction.
///
/// The a-windows are chosen to frame the crossing at a = 2/3 (two levels)
/// or the three neighbouring crossings of level 4 (four levels); they are
/// not read off the original plots. Two-level grids pin a = a_cr.
struct FigurePanel {
    std::string name;    // used in the output file name
    std::string caption; // parameter summary
    ModelSpec model;
    SweepGrid grid;
};

inline constexpr int kFigureCount = 6;

/// Panels for figure 1..6. Figure 5 carries both the |b_ij|^2 and the A/B
/// datasets (same parameter sets). Throws Error(Errc::config) for other n.
std::vector<FigurePanel> figure_panels(int figure);

/// Plots that display figure `figure` for one computed panel.
std::vector<PlotPanel> figure_plots(int figure, const FigurePanel& panel, const std::vector<Trajectory>& trajectories);

} // namespace epscope
