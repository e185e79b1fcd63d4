#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "epscope/sweep.hpp"

namespace epscope {

/// 12 significant digits, '.' decimal point; "nan"/"inf"/"-inf" for
/// non-finite values and negative zero printed as 0.
std::string format_number(double v);

/// Wide sweep table, one row per grid point:
///
///     a, then per trajectory i: E_i, gamma_half_i, re_b_i_j, im_b_i_j (j = 1..N),
///        delta_i, A_i, then per pair i < j: B_i_j
///
/// Indices in column names are 1-based. Lines end in '\n'.
void write_sweep_csv(std::ostream& out, const std::vector<Trajectory>& trajectories);

std::vector<std::string> sweep_csv_header(std::size_t n);

/// Minimal SVG line plots stacked vertically in one document.
struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::string colour = "#1f77b4";
    bool dashed = false;
};

struct PlotPanel {
    std::string title;
    std::string x_label = "a";
    std::string y_label;
    std::vector<PlotSeries> series;
};

/// Non-finite y values break the polyline.
void write_svg(std::ostream& out, const std::vector<PlotPanel>& panels);

/// Palette colour for series k.
const std::string& series_colour(std::size_t k);

} // namespace epscope
