#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "epscope/epfinder.hpp"
#include "epscope/model.hpp"
#include "epscope/sweep.hpp"

namespace epscope {

/// Default tolerance of the diagnostics (sign tests, structural checks).
inline constexpr double kDefaultTolerance = 1e-8;

struct OutputBlock {
    std::optional<std::string> csv;
    std::optional<std::string> svg;
    std::optional<double> tolerance;
};

/// Search box of the numeric branch-point finder.
struct SearchBlock {
    SearchBox box;
    std::optional<std::pair<std::size_t, std::size_t>> coupling; // 0-based entry for --solve-for omega
};

/// Parsed run configuration.
///
/// Text format: `[block]` headers followed by `key = value` lines, `#`
/// starts a comment. Blocks:
///
///     [level]      intercept, slope, gamma_half     (one block per level, in order)
///     [coupling]   omega (all off-diagonals), i,j   (1-based entry, mirrored)
///     [grid]       a_min, a_max, steps, adaptive, min_step, pin (comma list)
///     [output]     csv, svg, tolerance
///     [search]     a_min, a_max, scale_min, scale_max, coupling (i,j)
///
/// Numbers may be written as fractions (`-1/2`, `2/3`). Unknown blocks and
/// keys are rejected.
struct RunConfig {
    ModelSpec model;
    std::optional<SweepGrid> grid;
    OutputBlock output;
    std::optional<SearchBlock> search;
};

/// Throws Error(Errc::config) with the line number and field name.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// Number in decimal or p/q form; throws Error(Errc::config) naming `field`.
double parse_number(std::string_view text, std::string_view field);

/// Tolerance precedence: config value, then EPSCOPE_TOLERANCE, then the default.
double effective_tolerance(const OutputBlock& output);

} // namespace epscope
