#include "epscope/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <string>
#include <thread>

#include "epscope/config.hpp"
#include "epscope/figures.hpp"
#include "epscope/output.hpp"
#include "epscope/sweep.hpp"

namespace epscope {

namespace fs = std::filesystem;

int exit_code(Errc code) noexcept {
    switch (code) {
    case Errc::config:
    case Errc::invalid_model: return exit_config;
    case Errc::no_crossing:
    case Errc::not_bracketed: return exit_no_branch;
    default: return exit_numeric;
    }
}

namespace {

unsigned worker_count() {
    return std::clamp(std::thread::hardware_concurrency(), 1u, 8u);
}

void open_for_write(std::ofstream& f, const fs::path& path) {
    f.open(path, std::ios::binary);
    if (!f) throw Error(Errc::config, "cannot write " + path.string());
}

std::string fixed6(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::string complex6(cplx z) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.6f%+.6fi", z.real(), z.imag());
    return buf;
}

template <class F>
int guarded(Streams io, F&& body) {
    try {
        return body();
    } catch (const Error& e) {
        io.err << "epscope: " << e.what() << '\n';
        return exit_code(e.code());
    } catch (const std::exception& e) {
        io.err << "epscope: " << e.what() << '\n';
        return exit_numeric;
    }
}

} // namespace

int cmd_sweep(const fs::path& config, const std::optional<fs::path>& csv, const std::optional<fs::path>& svg,
              Streams io) {
    return guarded(io, [&] {
        const RunConfig cfg = load_config(config);
        if (!cfg.grid) throw Error(Errc::config, "grid: missing [grid] block");
        const double tol = effective_tolerance(cfg.output);
        const auto trajectories = run_sweep(cfg.model, *cfg.grid, SweepOptions{0.5, worker_count()});

        const auto csv_path = csv ? csv : cfg.output.csv ? std::optional<fs::path>(*cfg.output.csv) : std::nullopt;
        if (csv_path) {
            std::ofstream f;
            open_for_write(f, *csv_path);
            write_sweep_csv(f, trajectories);
            io.out << "wrote " << trajectories.front().points.size() << " rows to " << csv_path->string() << '\n';
        } else {
            write_sweep_csv(io.out, trajectories);
        }

        const auto svg_path = svg ? svg : cfg.output.svg ? std::optional<fs::path>(*cfg.output.svg) : std::nullopt;
        if (svg_path) {
            FigurePanel panel{"sweep", config.filename().string(), cfg.model, *cfg.grid};
            std::ofstream f;
            open_for_write(f, *svg_path);
            auto plots = figure_plots(2, panel, trajectories);
            for (auto& p : figure_plots(3, panel, trajectories)) plots.push_back(std::move(p));
            write_svg(f, plots);
        }

        // The classification summary goes to the error stream so that a CSV
        // on stdout stays clean.
        if (cfg.model.size() == 2) {
            try {
                const auto r = classify_crossing(trajectories, {cfg.grid->a_min, cfg.grid->a_max}, 0, 1, tol);
                io.err << "closest approach a=" << format_number(r.a_star) << " energy=" << to_string(r.energy_mode)
                       << " width=" << to_string(r.width_mode) << " exchange=" << (r.exchange ? "yes" : "no")
                       << '\n';
            } catch (const Error& e) {
                if (e.code() != Errc::window_too_narrow) throw;
                io.err << "closest approach on the grid boundary; no crossing classification\n";
            }
        }
        return int(exit_ok);
    });
}

int cmd_locate_ep(const fs::path& config, const LocateOptions& options, Streams io) {
    return guarded(io, [&] {
        const RunConfig cfg = load_config(config);
        const std::size_t n = cfg.model.size();
        BranchPoint bp;
        if (n == 2 && !options.pair) {
            bp = locate_ep_2level(cfg.model, options.solve_for);
        } else {
            if (!cfg.search) throw Error(Errc::config, "search: numeric branch-point search needs a [search] block");
            const auto pair1 = options.pair.value_or(std::make_pair<std::size_t, std::size_t>(1, 2));
            if (pair1.first == 0 || pair1.second == 0 || pair1.first > n || pair1.second > n ||
                pair1.first == pair1.second)
                throw Error(Errc::config, "--pair: expected two distinct states in 1.." + std::to_string(n));
            const std::pair<std::size_t, std::size_t> states{pair1.first - 1, pair1.second - 1};
            ScaleTarget target;
            if (options.solve_for == SolveFor::omega) {
                const auto entry = cfg.search->coupling.value_or(states);
                target = ScaleTarget{ScaleTarget::Kind::coupling, entry.first, entry.second};
            }
            bp = locate_ep_numeric(cfg.model, states, cfg.search->box, target);
        }

        io.out << "a_cr=" << fixed6(bp.a_cr);
        if (bp.omega_cr) io.out << " omega_cr=" << fixed6(*bp.omega_cr);
        if (bp.gamma_scale) io.out << " gamma_scale=" << fixed6(*bp.gamma_scale);
        io.out << " X=" << complex6(bp.X) << " residual=" << format_number(bp.residual) << '\n';

        if (options.csv) {
            std::ofstream f;
            open_for_write(f, *options.csv);
            auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string{}; };
            f << "a_cr,omega_cr,gamma_scale,re_X,im_X,residual\n"
              << format_number(bp.a_cr) << ',' << opt(bp.omega_cr) << ',' << opt(bp.gamma_scale) << ','
              << format_number(bp.X.real()) << ',' << format_number(bp.X.imag()) << ','
              << format_number(bp.residual) << '\n';
        }
        return int(exit_ok);
    });
}

int cmd_figure(int figure, const fs::path& out_dir, bool svg, Streams io) {
    return guarded(io, [&] {
        const auto panels = figure_panels(figure);
        std::error_code ec;
        fs::create_directories(out_dir, ec);
        if (ec) throw Error(Errc::config, "cannot create " + out_dir.string() + ": " + ec.message());
        for (const auto& panel : panels) {
            const auto trajectories = run_sweep(panel.model, panel.grid, SweepOptions{0.5, worker_count()});
            const std::string stem = "fig" + std::to_string(figure) + "_" + panel.name;
            std::ofstream f;
            open_for_write(f, out_dir / (stem + ".csv"));
            write_sweep_csv(f, trajectories);
            io.out << (out_dir / (stem + ".csv")).string() << '\n';
            if (svg) {
                std::ofstream s;
                open_for_write(s, out_dir / (stem + ".svg"));
                write_svg(s, figure_plots(figure, panel, trajectories));
                io.out << (out_dir / (stem + ".svg")).string() << '\n';
            }
        }
        return int(exit_ok);
    });
}

} // namespace epscope
