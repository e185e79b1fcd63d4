#include "epscope/charpoly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "epscope/error.hpp"

namespace epscope::charpoly {

namespace {

using Poly = std::vector<cplx>;

// Determinant of the principal submatrix picked out by idx, by cofactor
// expansion along the first row. Only used for orders <= 4.
cplx minor_det(const ComplexMatrix& h, const std::vector<std::size_t>& rows,
               const std::vector<std::size_t>& cols) {
    const std::size_t k = rows.size();
    if (k == 1) return h(rows[0], cols[0]);
    if (k == 2) return h(rows[0], cols[0]) * h(rows[1], cols[1]) - h(rows[0], cols[1]) * h(rows[1], cols[0]);
    cplx det{};
    std::vector<std::size_t> sub_rows(rows.begin() + 1, rows.end());
    std::vector<std::size_t> sub_cols;
    sub_cols.reserve(k - 1);
    for (std::size_t c = 0; c < k; ++c) {
        sub_cols.clear();
        for (std::size_t j = 0; j < k; ++j)
            if (j != c) sub_cols.push_back(cols[j]);
        const cplx term = h(rows[0], cols[c]) * minor_det(h, sub_rows, sub_cols);
        det += (c % 2 == 0) ? term : -term;
    }
    return det;
}

Poly expansion_coefficients(const ComplexMatrix& h) {
    const std::size_t n = h.order();
    Poly c(n + 1, cplx{});
    c[n] = 1.0;
    std::vector<cplx> principal_sum(n + 1, cplx{});
    std::vector<std::size_t> idx;
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        idx.clear();
        for (std::size_t b = 0; b < n; ++b)
            if (mask & (1u << b)) idx.push_back(b);
        principal_sum[idx.size()] += minor_det(h, idx, idx);
    }
    for (std::size_t k = 1; k <= n; ++k) c[n - k] = (k % 2 == 0) ? principal_sum[k] : -principal_sum[k];
    return c;
}

// Unitary similarity to upper Hessenberg form (Householder).
ComplexMatrix to_hessenberg(ComplexMatrix a) {
    const std::size_t n = a.order();
    std::vector<cplx> v(n);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        double xnorm = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) xnorm += std::norm(a(i, k));
        xnorm = std::sqrt(xnorm);
        if (xnorm == 0.0) continue;
        const cplx x0 = a(k + 1, k);
        const cplx phase = (std::abs(x0) == 0.0) ? cplx(1.0) : x0 / std::abs(x0);
        const cplx alpha = -phase * xnorm;
        std::fill(v.begin(), v.end(), cplx{});
        for (std::size_t i = k + 1; i < n; ++i) v[i] = a(i, k);
        v[k + 1] -= alpha;
        double vnorm = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) vnorm += std::norm(v[i]);
        vnorm = std::sqrt(vnorm);
        if (vnorm == 0.0) continue;
        for (std::size_t i = k + 1; i < n; ++i) v[i] /= vnorm;

        // A <- (I - 2 v v^H) A
        for (std::size_t c = 0; c < n; ++c) {
            cplx s{};
            for (std::size_t i = k + 1; i < n; ++i) s += std::conj(v[i]) * a(i, c);
            for (std::size_t i = k + 1; i < n; ++i) a(i, c) -= 2.0 * v[i] * s;
        }
        // A <- A (I - 2 v v^H)
        for (std::size_t r = 0; r < n; ++r) {
            cplx s{};
            for (std::size_t i = k + 1; i < n; ++i) s += a(r, i) * v[i];
            for (std::size_t i = k + 1; i < n; ++i) a(r, i) -= 2.0 * s * std::conj(v[i]);
        }
        for (std::size_t i = k + 2; i < n; ++i) a(i, k) = cplx{};
    }
    return a;
}

Poly hessenberg_coefficients(const ComplexMatrix& h) {
    const std::size_t n = h.order();
    // p[k] = det(z I - H[0..k, 0..k]), p[0] = 1.
    std::vector<Poly> p(n + 1);
    p[0] = Poly{cplx(1.0)};
    for (std::size_t k = 1; k <= n; ++k) {
        const std::size_t kk = k - 1;
        Poly next(k + 1, cplx{});
        // (z - h_kk) p[k-1]
        for (std::size_t d = 0; d < p[k - 1].size(); ++d) {
            next[d + 1] += p[k - 1][d];
            next[d] -= h(kk, kk) * p[k - 1][d];
        }
        cplx sub_product(1.0);
        for (std::size_t i = kk; i-- > 0;) {
            sub_product *= h(i + 1, i);
            const cplx factor = h(i, kk) * sub_product;
            for (std::size_t d = 0; d < p[i].size(); ++d) next[d] -= factor * p[i][d];
        }
        p[k] = std::move(next);
    }
    return p[n];
}

} // namespace

std::vector<cplx> coefficients(const ComplexMatrix& h) {
    if (h.order() <= 4) return expansion_coefficients(h);
    return hessenberg_coefficients(to_hessenberg(h));
}

cplx determinant(ComplexMatrix h) {
    const std::size_t n = h.order();
    cplx det(1.0);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t r = k + 1; r < n; ++r)
            if (std::abs(h(r, k)) > std::abs(h(p, k))) p = r;
        if (h(p, k) == cplx{}) return cplx{};
        if (p != k) {
            for (std::size_t c = 0; c < n; ++c) std::swap(h(k, c), h(p, c));
            det = -det;
        }
        det *= h(k, k);
        for (std::size_t r = k + 1; r < n; ++r) {
            const cplx m = h(r, k) / h(k, k);
            for (std::size_t c = k + 1; c < n; ++c) h(r, c) -= m * h(k, c);
        }
    }
    return det;
}

Evaluation evaluate(std::span<const cplx> coeffs, cplx z) {
    Evaluation e{cplx{}, cplx{}, 0.0};
    const double az = std::abs(z);
    for (std::size_t k = coeffs.size(); k-- > 0;) {
        e.derivative = e.derivative * z + e.value;
        e.value = e.value * z + coeffs[k];
        e.bound = e.bound * az + std::abs(coeffs[k]);
    }
    return e;
}

std::vector<cplx> aberth_roots(std::span<const cplx> coeffs, const AberthOptions& opts) {
    const std::size_t n = coeffs.size() - 1;
    if (n == 0) return {};
    const cplx lead = coeffs[n];
    std::vector<cplx> monic(coeffs.begin(), coeffs.end());
    for (auto& c : monic) c /= lead;
    if (n == 1) return {-monic[0]};

    // Fujiwara bound on the root moduli.
    double radius = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
        double term = std::pow(std::abs(monic[n - k]), 1.0 / static_cast<double>(k));
        if (k == n) term = std::pow(0.5 * std::abs(monic[0]), 1.0 / static_cast<double>(n));
        radius = std::max(radius, 2.0 * term);
    }
    const cplx centre = -monic[n - 1] / static_cast<double>(n);
    if (radius == 0.0) return std::vector<cplx>(n, centre);

    std::vector<cplx> z(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n) + 0.7;
        z[k] = centre + radius * cplx(std::cos(theta), std::sin(theta));
    }

    constexpr double eps = std::numeric_limits<double>::epsilon();
    std::vector<bool> done(n, false);
    for (int iter = 0; iter < opts.max_iterations; ++iter) {
        bool all_done = true;
        for (std::size_t i = 0; i < n; ++i) {
            if (done[i]) continue;
            const Evaluation e = evaluate(monic, z[i]);
            if (std::abs(e.value) <= 4.0 * static_cast<double>(n) * eps * e.bound) {
                done[i] = true;
                continue;
            }
            if (e.derivative == cplx{}) {
                z[i] += cplx(0.0, 1e-3 * radius);
                all_done = false;
                continue;
            }
            const cplx ratio = e.value / e.derivative;
            cplx repulsion{};
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) repulsion += 1.0 / (z[i] - z[j]);
            const cplx step = ratio / (1.0 - ratio * repulsion);
            z[i] -= step;
            if (std::abs(step) <= opts.tolerance * std::max(1.0, std::abs(z[i])))
                done[i] = true;
            else
                all_done = false;
        }
        if (all_done && std::all_of(done.begin(), done.end(), [](bool d) { return d; })) return z;
    }
    throw Error(Errc::no_convergence, "Aberth-Ehrlich iteration did not converge in " +
                                          std::to_string(opts.max_iterations) + " iterations");
}

} // namespace epscope::charpoly
