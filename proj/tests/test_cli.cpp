#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "epscope/commands.hpp"
#include "epscope/figures.hpp"

using namespace epscope;
namespace fs = std::filesystem;

namespace {

struct Scratch {
    fs::path dir;
    Scratch() : dir(fs::temp_directory_path() / ("epscope_cli_" + std::to_string(::getpid()))) {
        fs::create_directories(dir);
    }
    ~Scratch() { fs::remove_all(dir); }
    fs::path write(const std::string& name, const std::string& text) const {
        std::ofstream(dir / name) << text;
        return dir / name;
    }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        rows.emplace_back();
        std::istringstream ls(line);
        for (std::string cell; std::getline(ls, cell, ',');) rows.back().push_back(cell);
    }
    return rows;
}

std::size_t column(const std::vector<std::string>& header, const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    REQUIRE(it != header.end());
    return std::size_t(it - header.begin());
}

std::string two_level(double gh1, double gh2, const std::string& grid, const std::string& slope2 = "1") {
    std::ostringstream s;
    s << "[level]\nintercept = 1\nslope = -1/2\ngamma_half = " << gh1 << "\n[level]\nintercept = 0\nslope = "
      << slope2 << "\ngamma_half = " << gh2 << "\n[coupling]\nomega = 0.05\n"
      << grid;
    return s.str();
}

int run_binary(const std::string& args) {
    const int status = std::system((std::string(EPSCOPE_BIN) + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

} // namespace

TEST_CASE("sweep of the double-pole config") {
    Scratch s;
    const auto cfg =
        s.write("fig1.cfg", two_level(1.0, 1.1, "[grid]\na_min = 0.6\na_max = 0.74\nsteps = 281\npin = 2/3\n"));
    std::ostringstream out, err;
    REQUIRE(cmd_sweep(cfg, s.dir / "fig1.csv", s.dir / "fig1.svg", {out, err}) == exit_ok);
    const auto rows = read_csv(slurp(s.dir / "fig1.csv"));
    const auto& h = rows.front();
    bool found = false;
    for (const auto& r : rows) {
        if (r[0] != "0.666666666667") continue;
        found = true;
        CHECK(std::abs(std::stod(r[column(h, "E_1")]) - std::stod(r[column(h, "E_2")])) < 1e-8);
        CHECK(std::abs(std::stod(r[column(h, "gamma_half_1")]) - std::stod(r[column(h, "gamma_half_2")])) < 1e-8);
    }
    CHECK(found);
    CHECK(slurp(s.dir / "fig1.svg").find("<polyline") != std::string::npos);
    CHECK(err.str().find("free-cross") != std::string::npos);
}

TEST_CASE("sweep of discrete states has real coefficients") {
    Scratch s;
    const auto cfg = s.write("d.cfg", two_level(0, 0, "[grid]\na_min = 0\na_max = 1.4\nsteps = 141\n"));
    std::ostringstream out, err;
    REQUIRE(cmd_sweep(cfg, std::nullopt, std::nullopt, {out, err}) == exit_ok);
    const auto rows = read_csv(out.str());
    REQUIRE(rows.size() == 142);
    for (std::size_t c = 0; c < rows[0].size(); ++c)
        if (rows[0][c].rfind("im_b_", 0) == 0)
            for (std::size_t r = 1; r < rows.size(); ++r) CHECK(std::abs(std::stod(rows[r][c])) <= 1e-12);
}

TEST_CASE("sweep exit codes") {
    Scratch s;
    std::ostringstream out, err;
    const auto bad = s.write("bad.cfg", two_level(0, 0, "[grid]\na_min = 0\na_max = 1.4\nsteps = 1\n"));
    CHECK(cmd_sweep(bad, std::nullopt, std::nullopt, {out, err}) == exit_config);
    CHECK(err.str().find("grid.steps") != std::string::npos);
    CHECK(cmd_sweep(s.dir / "missing.cfg", std::nullopt, std::nullopt, {out, err}) == exit_config);
    const auto nogrid = s.write("nogrid.cfg", two_level(0, 0, ""));
    CHECK(cmd_sweep(nogrid, std::nullopt, std::nullopt, {out, err}) == exit_config);

    const auto coarse = s.write("c.cfg", "[level]\nintercept = -0.351\nslope = -0.285\n"
                                         "[level]\nintercept = -0.505\nslope = -0.896\n"
                                         "[level]\nintercept = -0.520\nslope = 0.772\n"
                                         "[coupling]\n1,2 = 0.018\n1,3 = 0.096\n2,3 = -0.15\n"
                                         "[grid]\na_min = 0\na_max = 1\nsteps = 2\nadaptive = false\n");
    CHECK(cmd_sweep(coarse, std::nullopt, std::nullopt, {out, err}) == exit_numeric);
    CHECK(err.str().find("TrackingAmbiguity") != std::string::npos);

    CHECK(exit_code(Errc::tracking_ambiguity) == exit_numeric);
    CHECK(exit_code(Errc::no_convergence) == exit_numeric);
    CHECK(exit_code(Errc::degenerate_widths) == exit_numeric);
    CHECK(exit_code(Errc::gap_floor_not_reached) == exit_numeric);
    CHECK(exit_code(Errc::not_bracketed) == exit_no_branch);
    CHECK(exit_code(Errc::no_crossing) == exit_no_branch);
}

TEST_CASE("locate-ep reports") {
    Scratch s;
    std::ostringstream out, err;
    const auto cfg = s.write("ep.cfg", two_level(1.0, 1.1, ""));
    REQUIRE(cmd_locate_ep(cfg, {SolveFor::omega, std::nullopt, s.dir / "ep.csv"}, {out, err}) == exit_ok);
    CHECK(out.str().rfind("a_cr=0.666667 omega_cr=0.050000 X=0.666667-1.050000i residual=", 0) == 0);
    CHECK(slurp(s.dir / "ep.csv").rfind("a_cr,omega_cr,gamma_scale,re_X,im_X,residual\n0.666666666667,0.05,,", 0) ==
          0);

    out.str("");
    const auto widths = s.write("w.cfg", two_level(0.90, 0.99, ""));
    REQUIRE(cmd_locate_ep(widths, {SolveFor::gamma_scale, std::nullopt, std::nullopt}, {out, err}) == exit_ok);
    const auto pos = out.str().find("gamma_scale=");
    REQUIRE(pos != std::string::npos);
    CHECK(std::abs(std::stod(out.str().substr(pos + 12)) - 10.0 / 9.0) < 1e-4);

    const auto parallel = s.write("p.cfg", two_level(1.0, 1.1, "", "-1/2"));
    CHECK(cmd_locate_ep(parallel, {}, {out, err}) == exit_no_branch);
    CHECK(err.str().find("NoCrossing") != std::string::npos);

    const auto equal = s.write("e.cfg", two_level(1.0, 1.0, ""));
    CHECK(cmd_locate_ep(equal, {SolveFor::gamma_scale, std::nullopt, std::nullopt}, {out, err}) == exit_numeric);

    CHECK(cmd_locate_ep(cfg, {SolveFor::omega, std::make_pair<std::size_t, std::size_t>(1, 2), std::nullopt},
                        {out, err}) == exit_config);

    out.str("");
    const auto boxed =
        s.write("b.cfg", two_level(1.0, 1.1, "[search]\na_min = 0.5\na_max = 0.8\nscale_min = 0.5\nscale_max = 1.7\n"));
    REQUIRE(cmd_locate_ep(boxed, {SolveFor::omega, std::make_pair<std::size_t, std::size_t>(1, 2), std::nullopt},
                          {out, err}) == exit_ok);
    CHECK(out.str().rfind("a_cr=0.666667 omega_cr=0.050000", 0) == 0);

    const auto outside =
        s.write("o.cfg", two_level(1.0, 1.1, "[search]\na_min = 0.7\na_max = 0.8\nscale_min = 0.5\nscale_max = 1.7\n"));
    CHECK(cmd_locate_ep(outside, {SolveFor::omega, std::make_pair<std::size_t, std::size_t>(1, 2), std::nullopt},
                        {out, err}) == exit_numeric);
    const auto edge =
        s.write("x.cfg", two_level(1.0, 1.1, "[search]\na_min = 0.5\na_max = 0.8\nscale_min = 1\nscale_max = 1.7\n"));
    CHECK(cmd_locate_ep(edge, {SolveFor::omega, std::make_pair<std::size_t, std::size_t>(1, 2), std::nullopt},
                        {out, err}) == exit_no_branch);
}

TEST_CASE("figure datasets") {
    Scratch s;
    std::ostringstream out, err;
    REQUIRE(cmd_figure(4, s.dir, false, {out, err}) == exit_ok);
    for (const char* name : {"fig4_g1.010.csv", "fig4_g0.990.csv", "fig4_g0.90.csv", "fig4_g0.csv"})
        CHECK(fs::exists(s.dir / name));

    REQUIRE(cmd_figure(6, s.dir, true, {out, err}) == exit_ok);
    for (const char* name : {"fig6_omega0.05", "fig6_omega0.1", "fig6_selective"}) {
        CHECK(fs::exists(s.dir / (std::string(name) + ".csv")));
        CHECK(fs::exists(s.dir / (std::string(name) + ".svg")));
    }
    CHECK(read_csv(slurp(s.dir / "fig6_selective.csv"))[0].size() == 1 + 4 * 12 + 6);

    REQUIRE(cmd_figure(1, s.dir, false, {out, err}) == exit_ok);
    const auto rows = read_csv(slurp(s.dir / "fig1_double_pole.csv"));
    CHECK(rows.size() >= 282);
    CHECK(rows[0].size() == 18);

    CHECK(cmd_figure(0, s.dir, false, {out, err}) == exit_config);
    CHECK(cmd_figure(7, s.dir, false, {out, err}) == exit_config);

    CHECK(figure_panels(2).size() == 3);
    CHECK(figure_panels(5).size() == 4);
    for (const auto& p : figure_panels(5))
        CHECK(p.model.levels[1].gamma == doctest::Approx(1.1 * p.model.levels[0].gamma).epsilon(1e-15));
}

TEST_CASE("command-line binary exit codes") {
    Scratch s;
    const auto good = s.write("g.cfg", two_level(1.0, 1.1, "[grid]\na_min = 0.6\na_max = 0.74\nsteps = 29\n"));
    const auto bad = s.write("b.cfg", two_level(1.0, 1.1, "[grid]\na_min = 0.6\na_max = 0.74\nsteps = 1\n"));
    const auto parallel = s.write("p.cfg", two_level(1.0, 1.1, "", "-1/2"));
    CHECK(run_binary("sweep --config " + good.string() + " --out " + (s.dir / "g.csv").string()) == 0);
    CHECK(run_binary("sweep --config " + bad.string()) == 2);
    CHECK(run_binary("locate-ep --config " + good.string()) == 0);
    CHECK(run_binary("locate-ep --config " + good.string() + " --solve-for gamma-scale") == 0);
    CHECK(run_binary("locate-ep --config " + good.string() + " --solve-for width") == 2);
    CHECK(run_binary("locate-ep --config " + good.string() + " --pair 1") == 2);
    CHECK(run_binary("locate-ep --config " + parallel.string()) == 4);
    CHECK(run_binary("figure 9 --out " + s.dir.string()) == 2);
    CHECK(run_binary("figure 2 --out " + s.dir.string()) == 0);
    CHECK(run_binary("") == 2);
}
