#include "epscope/epfinder.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "epscope/charpoly.hpp"
#include "epscope/diagnostics.hpp"
#include "epscope/eigen.hpp"
#include "epscope/error.hpp"

namespace epscope {

BranchPoint locate_ep_2level(const ModelSpec& model, SolveFor solve_for) {
    validate(model);
    if (model.size() != 2) throw Error(Errc::invalid_model, "locate_ep_2level needs a two-level model");
    const auto& l1 = model.levels[0];
    const auto& l2 = model.levels[1];
    const double slope = l1.energy.slope - l2.energy.slope;
    if (slope == 0.0) throw Error(Errc::no_crossing, "energy laws are parallel; de(a) never vanishes");

    BranchPoint bp;
    bp.a_cr = -(l1.energy.intercept - l2.energy.intercept) / slope;
    const double dgamma = l1.gamma - l2.gamma;
    const double omega = model.coupling(0, 1);

    ModelSpec at_ep = model;
    if (solve_for == SolveFor::omega) {
        bp.omega_cr = std::abs(dgamma) / 4.0;
        at_ep.coupling(0, 1) = at_ep.coupling(1, 0) = *bp.omega_cr;
    } else {
        if (dgamma == 0.0) {
            if (omega != 0.0)
                throw Error(Errc::degenerate_widths, "equal widths cannot be scaled onto a branch point at omega != 0");
            bp.gamma_scale = 1.0;
        } else {
            bp.gamma_scale = 4.0 * std::abs(omega) / std::abs(dgamma);
        }
        for (auto& lv : at_ep.levels) lv.gamma *= *bp.gamma_scale;
    }
    const auto eps = unperturbed_spectrum(at_ep, bp.a_cr);
    bp.X = 0.5 * (eps[0] + eps[1]);
    bp.residual = std::abs(discriminant(at_ep, bp.a_cr));
    return bp;
}

ModelSpec scaled_model(const ModelSpec& model, ScaleTarget target, double s) {
    ModelSpec m = model;
    if (target.kind == ScaleTarget::Kind::widths) {
        for (auto& lv : m.levels) lv.gamma *= s;
    } else {
        m.coupling(target.k, target.l) *= s;
        m.coupling(target.l, target.k) = m.coupling(target.k, target.l);
    }
    return m;
}

double pair_gap(const ModelSpec& model, double a, std::size_t i, std::size_t j, cplx* midpoint) {
    const ComplexMatrix h = build_matrix(model, a);
    const EigenSet set = eigen_general(h);
    const auto by_state = assign_states(set);
    const std::size_t p = by_state[i];
    const std::size_t q = by_state[j];
    const cplx m = 0.5 * (set.pairs[p].value + set.pairs[q].value);
    if (midpoint) *midpoint = m;

    // det(H - m) = -(d/2)^2 prod_{k != p,q} (lambda_k - m), d = lambda_p - lambda_q.
    ComplexMatrix shifted = h;
    for (std::size_t k = 0; k < h.order(); ++k) shifted(k, k) -= m;
    const cplx det = charpoly::determinant(shifted);
    cplx rest(1.0);
    for (std::size_t k = 0; k < set.size(); ++k)
        if (k != p && k != q) rest *= set.pairs[k].value - m;
    if (rest == cplx{}) return std::abs(set.pairs[p].value - set.pairs[q].value);
    return 2.0 * std::sqrt(std::abs(det / rest));
}

namespace {

struct Point2 {
    double x, y;
};

class GapObjective {
public:
    GapObjective(const ModelSpec& model, std::size_t i, std::size_t j, SearchBox box, ScaleTarget target)
        : model_(model), i_(i), j_(j), box_(box), target_(target) {}

    // Raw coordinates (a, s), clamped into the box.
    double raw(double a, double s) {
        ++evaluations;
        a = std::clamp(a, box_.a_lo, box_.a_hi);
        s = std::clamp(s, box_.s_lo, box_.s_hi);
        return pair_gap(scaled_model(model_, target_, s), a, i_, j_);
    }
    // Unit-square coordinates.
    double unit(Point2 u) { return raw(to_a(u.x), to_s(u.y)); }
    double to_a(double x) const { return box_.a_lo + std::clamp(x, 0.0, 1.0) * (box_.a_hi - box_.a_lo); }
    double to_s(double y) const { return box_.s_lo + std::clamp(y, 0.0, 1.0) * (box_.s_hi - box_.s_lo); }

    int evaluations = 0;

private:
    const ModelSpec& model_;
    std::size_t i_, j_;
    SearchBox box_;
    ScaleTarget target_;
};

struct Vertex {
    Point2 p;
    double f;
};

// Nelder-Mead in the unit square (reflection 1, expansion 2, contraction
// 1/2, shrink 1/2).
Vertex nelder_mead(GapObjective& obj, Point2 start, double size, int budget) {
    std::array<Vertex, 3> s{};
    s[0].p = start;
    s[1].p = {start.x + size, start.y};
    s[2].p = {start.x, start.y + size};
    for (auto& v : s) {
        v.p = {std::clamp(v.p.x, 0.0, 1.0), std::clamp(v.p.y, 0.0, 1.0)};
        v.f = obj.unit(v.p);
    }
    const int stop = obj.evaluations + budget;
    auto at = [&](Point2 c, Point2 w, double t) {
        return Point2{std::clamp(c.x + t * (w.x - c.x), 0.0, 1.0), std::clamp(c.y + t * (w.y - c.y), 0.0, 1.0)};
    };
    while (obj.evaluations < stop) {
        std::sort(s.begin(), s.end(), [](const Vertex& l, const Vertex& r) { return l.f < r.f; });
        const double extent = std::max({std::abs(s[1].p.x - s[0].p.x), std::abs(s[1].p.y - s[0].p.y),
                                        std::abs(s[2].p.x - s[0].p.x), std::abs(s[2].p.y - s[0].p.y)});
        if (extent < 1e-14) break;
        const Point2 c{0.5 * (s[0].p.x + s[1].p.x), 0.5 * (s[0].p.y + s[1].p.y)};
        const Point2 xr = at(c, s[2].p, -1.0);
        const double fr = obj.unit(xr);
        if (fr < s[0].f) {
            const Point2 xe = at(c, s[2].p, -2.0);
            const double fe = obj.unit(xe);
            s[2] = fe < fr ? Vertex{xe, fe} : Vertex{xr, fr};
        } else if (fr < s[1].f) {
            s[2] = {xr, fr};
        } else {
            const bool outside = fr < s[2].f;
            const Point2 xc = outside ? at(c, xr, 0.5) : at(c, s[2].p, 0.5);
            const double fc = obj.unit(xc);
            if (fc < std::min(fr, s[2].f)) {
                s[2] = {xc, fc};
            } else {
                for (int k = 1; k < 3; ++k) {
                    s[k].p = at(s[0].p, s[k].p, 0.5);
                    s[k].f = obj.unit(s[k].p);
                }
            }
        }
    }
    return *std::min_element(s.begin(), s.end(), [](const Vertex& l, const Vertex& r) { return l.f < r.f; });
}

// Shrinking-bracket search on one coordinate around the current best.
template <class F>
double bisect_coordinate(F&& f, double x, double& fx, double half_width, double lo_bound, double hi_bound) {
    double lo = std::max(lo_bound, x - half_width);
    double hi = std::min(hi_bound, x + half_width);
    for (int it = 0; it < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x)); ++it) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        const double f1 = f(m1);
        const double f2 = f(m2);
        if (f1 < fx) {
            x = m1;
            fx = f1;
        }
        if (f2 < fx) {
            x = m2;
            fx = f2;
        }
        if (f1 < f2)
            hi = m2;
        else
            lo = m1;
    }
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm < fx) {
        x = mid;
        fx = fm;
    }
    return x;
}

} // namespace

BranchPoint locate_ep_numeric(const ModelSpec& model, std::pair<std::size_t, std::size_t> states, SearchBox box,
                              ScaleTarget target, const NumericSearchOptions& opts) {
    validate(model);
    const std::size_t n = model.size();
    if (states.first >= n || states.second >= n || states.first == states.second)
        throw Error(Errc::invalid_model, "state pair out of range");
    if (!(box.a_lo < box.a_hi) || !(box.s_lo < box.s_hi))
        throw Error(Errc::not_bracketed, "search box is empty");
    if (target.kind == ScaleTarget::Kind::coupling &&
        (target.k >= n || target.l >= n || target.k == target.l))
        throw Error(Errc::invalid_model, "coupling entry out of range");

    GapObjective obj(model, states.first, states.second, box, target);
    const int restarts = opts.grid * opts.grid;
    const int budget = std::max(50, opts.max_evaluations / std::max(1, restarts));
    Vertex best{{0.5, 0.5}, std::numeric_limits<double>::infinity()};
    for (int gi = 0; gi < opts.grid; ++gi) {
        for (int gj = 0; gj < opts.grid; ++gj) {
            const Point2 start{(gi + 0.5) / opts.grid, (gj + 0.5) / opts.grid};
            const Vertex v = nelder_mead(obj, start, 0.5 / opts.grid, budget);
            if (v.f < best.f) best = v;
        }
    }

    double a = obj.to_a(best.p.x);
    double s = obj.to_s(best.p.y);
    double f = best.f;
    double ha = 1e-3 * (box.a_hi - box.a_lo);
    double hs = 1e-3 * (box.s_hi - box.s_lo);
    for (int round = 0; round < opts.polish_rounds; ++round) {
        const double before = f;
        a = bisect_coordinate([&](double x) { return obj.raw(x, s); }, a, f, ha, box.a_lo, box.a_hi);
        s = bisect_coordinate([&](double y) { return obj.raw(a, y); }, s, f, hs, box.s_lo, box.s_hi);
        if (f == 0.0 || (round > 2 && f >= before)) break;
        ha *= 0.5;
        hs *= 0.5;
    }

    const ModelSpec at_ep = scaled_model(model, target, s);
    cplx mid;
    const double gap = pair_gap(at_ep, a, states.first, states.second, &mid);
    const double floor = kRelativeGapFloor * build_matrix(at_ep, a).norm();
    if (!(gap <= floor)) {
        std::ostringstream msg;
        msg << "smallest gap " << gap << " at a=" << a << ", scale=" << s << " exceeds " << floor
            << " (avoided crossing)";
        throw Error(Errc::gap_floor_not_reached, msg.str());
    }
    const double edge_a = 1e-9 * (box.a_hi - box.a_lo);
    const double edge_s = 1e-9 * (box.s_hi - box.s_lo);
    if (a - box.a_lo < edge_a || box.a_hi - a < edge_a || s - box.s_lo < edge_s || box.s_hi - s < edge_s)
        throw Error(Errc::not_bracketed, "gap minimum lies on the search-box boundary");

    BranchPoint bp;
    bp.a_cr = a;
    if (target.kind == ScaleTarget::Kind::widths)
        bp.gamma_scale = s;
    else
        bp.omega_cr = std::abs(at_ep.coupling(target.k, target.l));
    bp.X = mid;
    bp.residual = gap;
    return bp;
}

} // namespace epscope
