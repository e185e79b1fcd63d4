#include "epscope/figures.hpp"

#include <cmath>
#include <cstdio>

#include "epscope/epfinder.hpp"
#include "epscope/error.hpp"

namespace epscope {

namespace {

std::string fixed(double v, int digits) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

FigurePanel two_level_panel(const std::string& tag, double gamma_half1, int digits, double a_min, double a_max,
                            std::size_t steps) {
    FigurePanel p;
    p.name = "g" + fixed(gamma_half1, digits);
    p.caption = tag + ": e1=1-a/2, e2=a, omega=0.05, gamma1/2=" + fixed(gamma_half1, digits) +
                ", gamma2=1.1*gamma1";
    p.model = reference_two_level(gamma_half1);
    p.grid = SweepGrid{a_min, a_max, steps, true, 1e-9, {locate_ep_2level(p.model).a_cr}};
    return p;
}

ModelSpec four_level(double omega) {
    return uniform_coupling({LevelSpec{EnergyLaw{1.0, -1.0 / 3.0}, 0.0}, LevelSpec{EnergyLaw{1.0, -5.0 / 12.0}, 0.0},
                             LevelSpec{EnergyLaw{1.0, -0.5}, 0.0}, LevelSpec{EnergyLaw{0.0, 1.0}, 0.0}},
                            omega);
}

ModelSpec four_level_selective() {
    ModelSpec m = uniform_coupling({LevelSpec{EnergyLaw{1.0, 0.0}, 0.0}, LevelSpec{EnergyLaw{1.2, 0.0}, 0.0},
                                    LevelSpec{EnergyLaw{1.0, -0.5}, 0.0}, LevelSpec{EnergyLaw{0.0, 1.0}, 0.0}},
                                   0.0);
    m.coupling(2, 3) = m.coupling(3, 2) = 0.1;
    return m;
}

std::vector<double> column(const Trajectory& t, double (*get)(const TrajectoryPoint&)) {
    std::vector<double> v;
    v.reserve(t.points.size());
    for (const auto& p : t.points) v.push_back(get(p));
    return v;
}

std::vector<double> abscissa(const Trajectory& t) {
    return column(t, [](const TrajectoryPoint& p) { return p.a; });
}

PlotPanel energies(const FigurePanel& fp, const std::vector<Trajectory>& tr, bool widths) {
    PlotPanel pl;
    pl.title = fp.caption;
    pl.y_label = widths ? "Gamma_i/2" : "E_i";
    const auto x = abscissa(tr.front());
    for (std::size_t i = 0; i < tr.size(); ++i) {
        PlotSeries s;
        s.label = (widths ? "Gamma/2 " : "E ") + std::to_string(i + 1);
        s.x = x;
        s.y = widths ? column(tr[i], [](const TrajectoryPoint& p) { return 0.5 * p.pair.gamma(); })
                     : column(tr[i], [](const TrajectoryPoint& p) { return p.pair.energy(); });
        s.colour = series_colour(i);
        pl.series.push_back(std::move(s));
    }
    for (std::size_t i = 0; i < fp.model.size(); ++i) {
        PlotSeries s;
        s.label = "omega=0, " + std::to_string(i + 1);
        s.x = x;
        for (double a : x) {
            const cplx e = unperturbed_spectrum(fp.model, a)[i];
            s.y.push_back(widths ? -e.imag() : e.real());
        }
        s.colour = "#999999";
        s.dashed = true;
        pl.series.push_back(std::move(s));
    }
    return pl;
}

// b_ii (diagonal == true) or the largest b_ij, j != i, of each trajectory's
// mixing row, real and imaginary parts.
PlotPanel coefficients(const FigurePanel& fp, const std::vector<Trajectory>& tr, bool diagonal) {
    PlotPanel pl;
    pl.title = fp.caption;
    pl.y_label = diagonal ? "b_ii" : "b_ij (j != i)";
    const auto x = abscissa(tr.front());
    std::size_t colour = 0;
    for (std::size_t t = 0; t < tr.size(); ++t) {
        PlotSeries re, im;
        re.label = "Re, state " + std::to_string(t + 1);
        im.label = "Im, state " + std::to_string(t + 1);
        re.x = im.x = x;
        for (const auto& p : tr[t].points) {
            const auto& row = p.mixing;
            std::size_t j = row.state;
            if (!diagonal) {
                double best = -1.0;
                for (std::size_t k = 0; k < row.abs2.size(); ++k)
                    if (k != row.state && row.abs2[k] > best) best = row.abs2[k], j = k;
                if (best < 0.0) j = row.state == 0 ? 1 : 0;
            }
            re.y.push_back(row.coefficients[j].real());
            im.y.push_back(row.coefficients[j].imag());
        }
        re.colour = series_colour(colour++);
        im.colour = series_colour(colour++);
        im.dashed = true;
        pl.series.push_back(std::move(re));
        pl.series.push_back(std::move(im));
    }
    return pl;
}

PlotPanel deltas(const FigurePanel& fp, const std::vector<Trajectory>& tr) {
    PlotPanel pl;
    pl.title = fp.caption;
    pl.y_label = "delta";
    const auto x = abscissa(tr.front());
    for (std::size_t t = 0; t < tr.size(); ++t) {
        PlotSeries s;
        s.label = "delta " + std::to_string(t + 1);
        s.x = x;
        s.y = column(tr[t], [](const TrajectoryPoint& p) { return p.mixing.delta; });
        s.colour = series_colour(t);
        pl.series.push_back(std::move(s));
    }
    return pl;
}

PlotPanel weights(const FigurePanel& fp, const std::vector<Trajectory>& tr, bool all_components) {
    PlotPanel pl;
    pl.title = fp.caption;
    pl.y_label = "|b_ij|^2";
    const auto x = abscissa(tr.front());
    std::size_t colour = 0;
    for (std::size_t t = 0; t < tr.size(); ++t) {
        const std::size_t n = tr[t].points.front().mixing.abs2.size();
        for (std::size_t j = 0; j < n; ++j) {
            if (!all_components && j > 1) break;
            PlotSeries s;
            s.label = "|b_" + std::to_string(t + 1) + std::to_string(j + 1) + "|^2";
            s.x = x;
            for (const auto& p : tr[t].points) s.y.push_back(p.mixing.abs2[j]);
            s.colour = series_colour(colour++);
            s.dashed = j != t;
            pl.series.push_back(std::move(s));
        }
    }
    return pl;
}

PlotPanel biorthogonality(const FigurePanel& fp, const std::vector<Trajectory>& tr) {
    PlotPanel pl;
    pl.title = fp.caption;
    pl.y_label = "A, B";
    const auto x = abscissa(tr.front());
    PlotSeries a, b;
    a.label = "A";
    b.label = "B";
    a.x = b.x = x;
    a.y = column(tr[0], [](const TrajectoryPoint& p) { return p.A; });
    for (const auto& p : tr[0].points) b.y.push_back(p.B.size() > 1 ? p.B[1] : 0.0);
    a.colour = series_colour(0);
    b.colour = series_colour(1);
    b.dashed = true;
    pl.series = {std::move(a), std::move(b)};
    return pl;
}

} // namespace

std::vector<FigurePanel> figure_panels(int figure) {
    switch (figure) {
    case 1: {
        auto p = two_level_panel("Fig. 1", 1.0, 2, 0.6, 0.74, 281);
        p.name = "double_pole";
        return {p};
    }
    case 2:
    case 3: {
        const std::string tag = "Fig. " + std::to_string(figure);
        return {two_level_panel(tag, 1.10, 2, 0.4, 0.95, 221), two_level_panel(tag, 0.90, 2, 0.4, 0.95, 221),
                two_level_panel(tag, 0.0, 0, 0.4, 0.95, 221)};
    }
    case 4:
    case 5: {
        const std::string tag = "Fig. " + std::to_string(figure);
        return {two_level_panel(tag, 1.010, 3, 0.4, 0.95, 221), two_level_panel(tag, 0.990, 3, 0.4, 0.95, 221),
                two_level_panel(tag, 0.90, 2, 0.4, 0.95, 221), two_level_panel(tag, 0.0, 0, 0.4, 0.95, 221)};
    }
    case 6: {
        const SweepGrid grid{0.2, 1.3, 221, true, 1e-9, {}};
        return {
            FigurePanel{"omega0.05", "Fig. 6: four levels, omega=0.05 on all pairs", four_level(0.05), grid},
            FigurePanel{"omega0.1", "Fig. 6: four levels, omega=0.1 on all pairs", four_level(0.1), grid},
            FigurePanel{"selective", "Fig. 6: e1=1, e2=1.2, omega=0.1 only between levels 3 and 4",
                        four_level_selective(), grid},
        };
    }
    default:
        throw Error(Errc::config, "figure number must be 1.." + std::to_string(kFigureCount) + ", got " +
                                      std::to_string(figure));
    }
}

std::vector<PlotPanel> figure_plots(int figure, const FigurePanel& panel, const std::vector<Trajectory>& tr) {
    switch (figure) {
    case 1:
        return {energies(panel, tr, false), energies(panel, tr, true), coefficients(panel, tr, true),
                coefficients(panel, tr, false)};
    case 2: return {energies(panel, tr, false), energies(panel, tr, true)};
    case 3: return {coefficients(panel, tr, true), coefficients(panel, tr, false)};
    case 4: return {deltas(panel, tr)};
    case 5: return {weights(panel, tr, false), biorthogonality(panel, tr)};
    case 6: return {energies(panel, tr, false), weights(panel, tr, true)};
    default: throw Error(Errc::config, "figure number out of range");
    }
}

} // namespace epscope
