#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <utility>

#include "epscope/epfinder.hpp"
#include "epscope/error.hpp"

namespace epscope {

/// Process exit codes of the epscope command line.
enum ExitCode : int {
    exit_ok = 0,
    exit_config = 2,    // bad config, bad flag value, unknown figure
    exit_numeric = 3,   // tracking ambiguity, no convergence, degenerate widths, ...
    exit_no_branch = 4, // no crossing / branch point not bracketed by the search box
};

int exit_code(Errc code) noexcept;

struct Streams {
    std::ostream& out;
    std::ostream& err;
};

/// Sweep the configured model over its [grid]; CSV goes to `csv` (or the
/// config's output.csv, or `out` when neither is given).
int cmd_sweep(const std::filesystem::path& config, const std::optional<std::filesystem::path>& csv,
              const std::optional<std::filesystem::path>& svg, Streams io);

struct LocateOptions {
    SolveFor solve_for = SolveFor::omega;
    std::optional<std::pair<std::size_t, std::size_t>> pair; // 1-based as given on the command line
    std::optional<std::filesystem::path> csv;
};

/// Two-level models without --pair use the closed form; everything else
/// runs the numeric search inside the config's [search] box.
int cmd_locate_ep(const std::filesystem::path& config, const LocateOptions& options, Streams io);

/// Writes figN_<panel>.csv (and .svg) into `out_dir`.
int cmd_figure(int figure, const std::filesystem::path& out_dir, bool svg, Streams io);

} // namespace epscope
