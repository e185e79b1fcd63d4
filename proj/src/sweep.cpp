#include "epscope/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include "epscope/error.hpp"

namespace epscope {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<EigenSet> solve_all(const ModelSpec& model, const std::vector<double>& as, unsigned workers) {
    std::vector<EigenSet> out(as.size());
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(as.size())));
    if (workers == 1) {
        for (std::size_t k = 0; k < as.size(); ++k) out[k] = solve(model, as[k]);
        return out;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t k = w; k < as.size(); k += workers) out[k] = solve(model, as[k]);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

// Greedy matching on a score matrix score[t][p], largest first.
// Returns pair index per trajectory and the matched scores.
std::vector<std::size_t> greedy_match(const std::vector<std::vector<double>>& score, std::vector<double>& matched) {
    const std::size_t n = score.size();
    struct Entry {
        double s;
        std::size_t t, p;
    };
    std::vector<Entry> entries;
    for (std::size_t t = 0; t < n; ++t)
        for (std::size_t p = 0; p < n; ++p) entries.push_back({score[t][p], t, p});
    std::stable_sort(entries.begin(), entries.end(), [](const Entry& l, const Entry& r) { return l.s > r.s; });
    constexpr auto unset = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> pair_of(n, unset);
    std::vector<bool> used(n, false);
    matched.assign(n, 0.0);
    for (const auto& e : entries) {
        if (pair_of[e.t] != unset || used[e.p]) continue;
        pair_of[e.t] = e.p;
        used[e.p] = true;
        matched[e.t] = e.s;
    }
    return pair_of;
}

struct Link {
    std::vector<std::size_t> pair_of;
    double weakest = 0.0;
};

Link link_by_overlap(const std::vector<std::vector<cplx>>& reference, const EigenSet& next) {
    const std::size_t n = next.size();
    std::vector<std::vector<double>> score(n, std::vector<double>(n));
    for (std::size_t t = 0; t < n; ++t)
        for (std::size_t p = 0; p < n; ++p) score[t][p] = std::abs(bilinear(reference[t], next.pairs[p].vector));
    std::vector<double> matched;
    Link link{greedy_match(score, matched), 0.0};
    link.weakest = *std::min_element(matched.begin(), matched.end());
    return link;
}

Link link_by_value(const std::vector<cplx>& reference, const EigenSet& next) {
    const std::size_t n = next.size();
    std::vector<std::vector<double>> score(n, std::vector<double>(n));
    for (std::size_t t = 0; t < n; ++t)
        for (std::size_t p = 0; p < n; ++p) score[t][p] = -std::abs(reference[t] - next.pairs[p].value);
    std::vector<double> matched;
    return Link{greedy_match(score, matched), 1.0};
}

void append_point(std::vector<Trajectory>& trajectories, double a, const EigenSet& set,
                  const std::vector<std::size_t>& pair_of) {
    const std::size_t n = set.size();
    if (set.degenerate) {
        for (std::size_t t = 0; t < n; ++t) {
            TrajectoryPoint pt;
            pt.a = a;
            pt.pair = set.pairs[pair_of[t]];
            pt.mixing.state = t;
            pt.mixing.pair = pair_of[t];
            pt.mixing.coefficients.assign(n, cplx(kNaN, kNaN));
            pt.mixing.abs2.assign(n, kNaN);
            pt.mixing.delta = kNaN;
            pt.A = kInf;
            pt.B.assign(n, kInf);
            pt.B[t] = 0.0;
            pt.degenerate = true;
            trajectories[t].points.push_back(std::move(pt));
        }
        return;
    }
    const auto by_state = assign_states(set);
    std::vector<std::size_t> state_of(n);
    for (std::size_t s = 0; s < n; ++s) state_of[by_state[s]] = s;
    const auto measures = biorth_measures(set);
    for (std::size_t t = 0; t < n; ++t) {
        const std::size_t p = pair_of[t];
        TrajectoryPoint pt;
        pt.a = a;
        pt.pair = set.pairs[p];
        pt.mixing = mixing_row(set.pairs[p].vector, state_of[p], p);
        pt.A = measures.A[p];
        pt.B.resize(n);
        for (std::size_t u = 0; u < n; ++u) pt.B[u] = (u == t) ? 0.0 : measures.B[p][pair_of[u]];
        trajectories[t].points.push_back(std::move(pt));
    }
}

} // namespace

void validate(const SweepGrid& grid) {
    if (grid.steps < 2) throw Error(Errc::config, "grid.steps must be >= 2");
    if (!std::isfinite(grid.a_min) || !std::isfinite(grid.a_max) || !(grid.a_min < grid.a_max))
        throw Error(Errc::config, "grid: need finite a_min < a_max");
    if (!(grid.min_step > 0.0)) throw Error(Errc::config, "grid.min_step must be > 0");
}

std::vector<double> grid_points(const SweepGrid& grid) {
    validate(grid);
    std::vector<double> as;
    as.reserve(grid.steps + grid.pinned.size());
    const double span = grid.a_max - grid.a_min;
    const double last = static_cast<double>(grid.steps - 1);
    for (std::size_t k = 0; k < grid.steps; ++k)
        as.push_back(k + 1 == grid.steps ? grid.a_max : grid.a_min + span * (static_cast<double>(k) / last));
    for (double p : grid.pinned)
        if (p >= grid.a_min && p <= grid.a_max) as.push_back(p);
    std::sort(as.begin(), as.end());
    as.erase(std::unique(as.begin(), as.end()), as.end());
    return as;
}

std::vector<Trajectory> run_sweep(const ModelSpec& model, const SweepGrid& grid, const SweepOptions& options) {
    validate(model);
    std::vector<double> as = grid_points(grid);
    std::vector<EigenSet> sets = solve_all(model, as, options.workers);
    const std::size_t n = model.size();

    std::vector<Trajectory> trajectories(n);
    for (std::size_t t = 0; t < n; ++t) trajectories[t].label = t;

    // Reference for linking: vectors and values of the last accepted point,
    // per trajectory. Vectors only come from non-degenerate points.
    std::vector<std::vector<cplx>> ref_vectors(n);
    std::vector<cplx> ref_values(n);
    bool have_vectors = false;

    auto accept = [&](double a, const EigenSet& set, const std::vector<std::size_t>& pair_of) {
        append_point(trajectories, a, set, pair_of);
        for (std::size_t t = 0; t < n; ++t) {
            ref_values[t] = set.pairs[pair_of[t]].value;
            if (!set.degenerate) ref_vectors[t] = set.pairs[pair_of[t]].vector;
        }
        have_vectors = have_vectors || !set.degenerate;
    };

    // First point: trajectory t is the eigenpair attributed to basis state t.
    accept(as.front(), sets.front(), assign_states(sets.front()));

    std::size_t k = 1;
    while (k < as.size()) {
        const EigenSet& set = sets[k];
        Link link = (set.degenerate || !have_vectors) ? link_by_value(ref_values, set)
                                                      : link_by_overlap(ref_vectors, set);
        if (link.weakest < options.continuity_threshold) {
            const double prev = as[k - 1];
            const double step = as[k] - prev;
            if (!grid.adaptive || step <= grid.min_step) {
                std::ostringstream msg;
                msg << "eigenvector overlap " << link.weakest << " below " << options.continuity_threshold
                    << " on [" << prev << ", " << as[k] << "]";
                throw Error(Errc::tracking_ambiguity, msg.str());
            }
            const double mid = prev + 0.5 * step;
            as.insert(as.begin() + static_cast<std::ptrdiff_t>(k), mid);
            sets.insert(sets.begin() + static_cast<std::ptrdiff_t>(k), solve(model, mid));
            continue;
        }
        accept(as[k], set, link.pair_of);
        ++k;
    }
    return trajectories;
}

const char* to_string(CrossingMode mode) noexcept {
    return mode == CrossingMode::free_cross ? "free-cross" : "avoided";
}

CrossingReport classify_crossing(const std::vector<Trajectory>& trajectories, CrossingWindow window,
                                 std::size_t t, std::size_t u, double tolerance) {
    if (t >= trajectories.size() || u >= trajectories.size() || t == u)
        throw Error(Errc::invalid_model, "classify_crossing: bad trajectory pair");
    const auto& pt = trajectories[t].points;
    const auto& pu = trajectories[u].points;

    std::vector<std::size_t> inside;
    for (std::size_t k = 0; k < pt.size(); ++k)
        if (pt[k].a >= window.a_lo && pt[k].a <= window.a_hi) inside.push_back(k);
    if (inside.size() < 3) throw Error(Errc::window_too_narrow, "fewer than three grid points in the window");

    CrossingReport r;
    r.energy_gap_min = kInf;
    r.width_gap_min = kInf;
    double best = kInf;
    std::size_t best_pos = 0;
    for (std::size_t pos = 0; pos < inside.size(); ++pos) {
        const std::size_t k = inside[pos];
        const cplx lt = pt[k].pair.value;
        const cplx lu = pu[k].pair.value;
        const double gap = std::abs(lt - lu);
        if (gap < best) {
            best = gap;
            best_pos = pos;
        }
        r.energy_gap_min = std::min(r.energy_gap_min, std::abs(lt.real() - lu.real()));
        r.width_gap_min = std::min(r.width_gap_min, std::abs(lt.imag() - lu.imag()));
    }
    if (best_pos == 0 || best_pos + 1 == inside.size())
        throw Error(Errc::window_too_narrow, "closest approach is not bracketed by the window");
    r.a_star = pt[inside[best_pos]].a;
    r.ep_proximity = best;

    auto sign = [tolerance](double d) { return std::abs(d) <= tolerance ? 0 : (d > 0.0 ? 1 : -1); };
    auto mode = [&](double first, double last) {
        const int s0 = sign(first);
        const int s1 = sign(last);
        return (s0 * s1 < 0 || (s0 == 0 && s1 == 0)) ? CrossingMode::free_cross : CrossingMode::avoided;
    };
    const std::size_t k0 = inside.front();
    const std::size_t k1 = inside.back();
    r.energy_mode = mode(pt[k0].pair.energy() - pu[k0].pair.energy(), pt[k1].pair.energy() - pu[k1].pair.energy());
    r.width_mode = mode(pt[k0].pair.gamma() - pu[k0].pair.gamma(), pt[k1].pair.gamma() - pu[k1].pair.gamma());
    r.exchange = pt[k0].mixing.state != pt[k1].mixing.state;
    return r;
}

} // namespace epscope
