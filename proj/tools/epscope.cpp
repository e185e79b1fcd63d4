// epscope: sweeps, branch-point search and figure datasets for
// complex-symmetric model Hamiltonians.
//
// Exit codes: 0 ok, 2 config/usage error, 3 numeric failure,
// 4 no crossing / branch point not bracketed.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "epscope/commands.hpp"
#include "epscope/config.hpp"

int main(int argc, char** argv) {
    using namespace epscope;
    CLI::App app{"epscope - exceptional points and level crossings of complex-symmetric Hamiltonians"};
    app.require_subcommand(1);

    std::string config;
    std::string out;
    std::string svg;

    auto* sweep = app.add_subcommand("sweep", "eigenvalue trajectories and mixing over the [grid] block");
    sweep->add_option("--config", config, "model config")->required();
    sweep->add_option("--out", out, "CSV file (default: output.csv of the config, else stdout)");
    sweep->add_option("--svg", svg, "SVG plot file");

    std::string solve_for = "omega";
    std::string pair;
    auto* locate = app.add_subcommand("locate-ep", "locate the branch point (double pole)");
    locate->add_option("--config", config, "model config")->required();
    locate->add_option("--solve-for", solve_for, "parameter tuned onto the branch point")
        ->check(CLI::IsMember({"omega", "gamma-scale"}));
    locate->add_option("--pair", pair, "states i,j (1-based); forces the numeric search");
    locate->add_option("--out", out, "also write a one-row CSV");

    int figure = 0;
    bool figure_svg = false;
    std::string out_dir = ".";
    auto* fig = app.add_subcommand("figure", "reproduce the datasets of figure N (1-6)");
    fig->add_option("N", figure, "figure number")->required();
    fig->add_option("--out", out_dir, "output directory");
    fig->add_flag("--svg", figure_svg, "also write SVG plots");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : exit_config;
    }

    const Streams io{std::cout, std::cerr};
    if (*sweep) {
        std::optional<std::filesystem::path> csv, plot;
        if (!out.empty()) csv = out;
        if (!svg.empty()) plot = svg;
        return cmd_sweep(config, csv, plot, io);
    }
    if (*locate) {
        LocateOptions opts;
        opts.solve_for = solve_for == "gamma-scale" ? SolveFor::gamma_scale : SolveFor::omega;
        if (!out.empty()) opts.csv = out;
        if (!pair.empty()) {
            const auto comma = pair.find(',');
            try {
                if (comma == std::string::npos) throw Error(Errc::config, "expected i,j");
                const double i = parse_number(pair.substr(0, comma), "--pair");
                const double j = parse_number(pair.substr(comma + 1), "--pair");
                if (i < 1 || j < 1 || i != static_cast<std::size_t>(i) || j != static_cast<std::size_t>(j))
                    throw Error(Errc::config, "--pair: indices are positive integers");
                opts.pair = std::make_pair(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
            } catch (const Error& e) {
                std::cerr << "epscope: " << e.what() << '\n';
                return exit_config;
            }
        }
        return cmd_locate_ep(config, opts, io);
    }
    return cmd_figure(figure, out_dir, figure_svg, io);
}
