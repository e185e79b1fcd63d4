#include "epscope/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "epscope/error.hpp"

namespace epscope {

std::vector<std::size_t> assign_states(const EigenSet& set) {
    const std::size_t n = set.size();
    struct Entry {
        double weight;
        std::size_t pair;
        std::size_t state;
    };
    std::vector<Entry> entries;
    entries.reserve(n * n);
    for (std::size_t p = 0; p < n; ++p) {
        const auto& x = set.pairs[p].vector;
        double total = 0.0;
        for (const auto& z : x) total += std::norm(z);
        for (std::size_t j = 0; j < n; ++j)
            entries.push_back({total > 0.0 ? std::norm(x[j]) / total : 0.0, p, j});
    }
    // Largest weight first; exact ties by pair, then state index.
    std::stable_sort(entries.begin(), entries.end(), [](const Entry& l, const Entry& r) {
        return std::tie(r.weight, l.pair, l.state) < std::tie(l.weight, r.pair, r.state);
    });
    constexpr auto unset = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> by_state(n, unset);
    std::vector<bool> pair_used(n, false);
    for (const auto& e : entries) {
        if (pair_used[e.pair] || by_state[e.state] != unset) continue;
        by_state[e.state] = e.pair;
        pair_used[e.pair] = true;
    }
    return by_state;
}

MixingRow mixing_row(std::span<const cplx> vector, std::size_t state, std::size_t pair) {
    MixingRow row;
    row.state = state;
    row.pair = pair;
    row.coefficients.assign(vector.begin(), vector.end());
    row.abs2.reserve(vector.size());
    double competitor = 0.0;
    for (std::size_t j = 0; j < vector.size(); ++j) {
        row.abs2.push_back(std::norm(vector[j]));
        if (j != state) competitor = std::max(competitor, row.abs2.back());
    }
    row.delta = row.abs2[state] - competitor;
    return row;
}

std::vector<MixingRow> mixing(const EigenSet& set) {
    const auto by_state = assign_states(set);
    std::vector<MixingRow> rows;
    rows.reserve(set.size());
    for (std::size_t i = 0; i < set.size(); ++i)
        rows.push_back(mixing_row(set.pairs[by_state[i]].vector, i, by_state[i]));
    return rows;
}

std::vector<double> delta_at(const EigenSet& set) {
    std::vector<double> out;
    for (const auto& row : mixing(set)) out.push_back(row.delta);
    return out;
}

BiorthMeasures biorth_measures(const EigenSet& set) {
    const std::size_t n = set.size();
    BiorthMeasures m;
    m.A.resize(n);
    m.B.assign(n, std::vector<double>(n, 0.0));
    m.overlaps.assign(n, std::vector<cplx>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            m.overlaps[i][j] = inner(set.pairs[i].vector, set.pairs[j].vector);
    for (std::size_t i = 0; i < n; ++i) {
        m.A[i] = m.overlaps[i][i].real();
        m.self_imag_defect = std::max(m.self_imag_defect, std::abs(m.overlaps[i][i].imag()));
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            m.B[i][j] = std::abs(m.overlaps[i][j]);
            m.cross_real_defect = std::max(m.cross_real_defect, std::abs(m.overlaps[i][j].real()));
            m.antisymmetry_defect =
                std::max(m.antisymmetry_defect, std::abs(m.overlaps[i][j] + m.overlaps[j][i]));
            m.equal_norm_defect = std::max(m.equal_norm_defect, std::abs(m.A[i] - m.A[j]));
        }
    }
    return m;
}

double ep_vector_relation(const EigenSet& set) {
    if (set.size() != 2) throw Error(Errc::invalid_model, "ep_vector_relation needs a two-level set");
    auto unit = [](std::vector<cplx> x) {
        double s = 0.0;
        for (const auto& z : x) s += std::norm(z);
        s = std::sqrt(s);
        for (auto& z : x) z /= s;
        return x;
    };
    const auto u1 = unit(set.pairs[0].vector);
    const auto u2 = unit(set.pairs[1].vector);

    auto pure = [](const std::vector<cplx>& u) {
        return std::abs(u[0]) < 1e-14 || std::abs(u[1]) < 1e-14;
    };
    if (pure(u1) && pure(u2)) return 1.0;

    const cplx i(0.0, 1.0);
    double best = std::numeric_limits<double>::infinity();
    for (const double sign : {1.0, -1.0}) {
        double s = 0.0;
        for (std::size_t k = 0; k < 2; ++k) s += std::norm(u1[k] - sign * i * u2[k]);
        best = std::min(best, std::sqrt(s));
    }
    return best; // ||u1|| == 1
}

} // namespace epscope
