#include "epscope/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "epscope/charpoly.hpp"
#include "epscope/error.hpp"

namespace epscope {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double vec_norm(std::span<const cplx> x) {
    double s = 0.0;
    for (const auto& z : x) s += std::norm(z);
    return std::sqrt(s);
}

std::size_t largest_component(std::span<const cplx> x) {
    double best = 0.0;
    for (const auto& z : x) best = std::max(best, std::abs(z));
    // First index within rounding of the maximum, so near-ties resolve the
    // same way every time.
    for (std::size_t k = 0; k < x.size(); ++k)
        if (std::abs(x[k]) >= best * (1.0 - 1e-12)) return k;
    return 0;
}

double residual(const ComplexMatrix& h, cplx lambda, std::span<const cplx> x) {
    const std::size_t n = h.order();
    const double xn = vec_norm(x);
    if (xn == 0.0) return std::numeric_limits<double>::infinity();
    double s = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        cplx acc = -lambda * x[r];
        for (std::size_t c = 0; c < n; ++c) acc += h(r, c) * x[c];
        s += std::norm(acc);
    }
    return std::sqrt(s) / xn;
}

// Unit conjugated norm with the largest component made real and positive.
// Used for directions that cannot be bi-orthonormalized.
void unit_direction(std::vector<cplx>& x) {
    const std::size_t k = largest_component(x);
    if (x[k] == cplx{}) return;
    const cplx phase = x[k] / std::abs(x[k]);
    const double nrm = vec_norm(x);
    for (auto& z : x) z /= phase * nrm;
    x[k] = cplx(x[k].real(), 0.0);
}

class LuFactor {
public:
    LuFactor(const ComplexMatrix& h, cplx shift) : n_(h.order()), lu_(h), piv_(n_) {
        const double floor = std::max(kEps * h.norm(), std::numeric_limits<double>::min());
        for (std::size_t k = 0; k < n_; ++k) lu_(k, k) -= shift;
        std::iota(piv_.begin(), piv_.end(), std::size_t{0});
        for (std::size_t k = 0; k < n_; ++k) {
            std::size_t p = k;
            for (std::size_t r = k + 1; r < n_; ++r)
                if (std::abs(lu_(r, k)) > std::abs(lu_(p, k))) p = r;
            if (p != k) {
                for (std::size_t c = 0; c < n_; ++c) std::swap(lu_(k, c), lu_(p, c));
                std::swap(piv_[k], piv_[p]);
            }
            if (std::abs(lu_(k, k)) < floor) lu_(k, k) = floor;
            for (std::size_t r = k + 1; r < n_; ++r) {
                const cplx m = lu_(r, k) / lu_(k, k);
                lu_(r, k) = m;
                for (std::size_t c = k + 1; c < n_; ++c) lu_(r, c) -= m * lu_(k, c);
            }
        }
    }

    std::vector<cplx> solve(std::span<const cplx> b) const {
        std::vector<cplx> y(n_);
        for (std::size_t r = 0; r < n_; ++r) {
            cplx acc = b[piv_[r]];
            for (std::size_t c = 0; c < r; ++c) acc -= lu_(r, c) * y[c];
            y[r] = acc;
        }
        for (std::size_t r = n_; r-- > 0;) {
            cplx acc = y[r];
            for (std::size_t c = r + 1; c < n_; ++c) acc -= lu_(r, c) * y[c];
            y[r] = acc / lu_(r, r);
        }
        return y;
    }

private:
    std::size_t n_;
    ComplexMatrix lu_;
    std::vector<std::size_t> piv_;
};

// Inverse iteration: one solve from a fixed start vector plus two
// refinement solves.
std::vector<cplx> inverse_iteration(const ComplexMatrix& h, cplx lambda) {
    const std::size_t n = h.order();
    const LuFactor lu(h, lambda);
    std::vector<cplx> x(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double kd = static_cast<double>(k);
        x[k] = cplx(1.0 + 0.1234 * kd, 0.0577 * (kd * kd + 1.0));
    }
    for (int step = 0; step < 3; ++step) {
        x = lu.solve(x);
        const double s = vec_norm(x);
        for (auto& z : x) z /= s;
    }
    return x;
}

void canonical_sort(std::vector<EigenPair>& pairs, double scale) {
    std::sort(pairs.begin(), pairs.end(),
              [](const EigenPair& l, const EigenPair& r) { return l.value.real() < r.value.real(); });
    // Real parts equal up to rounding form one group, ordered by imaginary part.
    const double tie = 1e-12 * std::max(1.0, scale);
    std::size_t begin = 0;
    while (begin < pairs.size()) {
        std::size_t end = begin + 1;
        while (end < pairs.size() && pairs[end].value.real() - pairs[end - 1].value.real() <= tie) ++end;
        std::sort(pairs.begin() + static_cast<std::ptrdiff_t>(begin), pairs.begin() + static_cast<std::ptrdiff_t>(end),
                  [](const EigenPair& l, const EigenPair& r) { return l.value.imag() < r.value.imag(); });
        begin = end;
    }
}

void require_two_levels(const ModelSpec& model) {
    if (model.size() != 2)
        throw Error(Errc::invalid_model, "two-level operation called on a " + std::to_string(model.size()) + "-level model");
}

} // namespace

cplx principal_sqrt(cplx z) noexcept {
    cplx s = std::sqrt(z);
    if (s.real() == 0.0 && s.imag() < 0.0) s = -s;
    return s;
}

cplx bilinear(std::span<const cplx> x, std::span<const cplx> y) noexcept {
    cplx s{};
    for (std::size_t k = 0; k < x.size(); ++k) s += x[k] * y[k];
    return s;
}

cplx inner(std::span<const cplx> x, std::span<const cplx> y) noexcept {
    cplx s{};
    for (std::size_t k = 0; k < x.size(); ++k) s += std::conj(x[k]) * y[k];
    return s;
}

cplx discriminant(const ModelSpec& model, double a) {
    require_two_levels(model);
    const auto eps = unperturbed_spectrum(model, a);
    const cplx d = eps[0] - eps[1];
    const double omega = model.coupling(0, 1);
    return d * d + 4.0 * omega * omega;
}

EigenSet eigen2_analytic(const ModelSpec& model, double a) {
    require_two_levels(model);
    const auto eps = unperturbed_spectrum(model, a);
    const double omega = model.coupling(0, 1);
    const cplx f = discriminant(model, a);
    const cplx mid = 0.5 * (eps[0] + eps[1]);
    const ComplexMatrix h = build_matrix(model, a);

    EigenSet set;
    set.matrix_norm = h.norm();

    auto vector_for = [&](cplx lambda) {
        // Both columns of adj(H - lambda) are eigenvectors; keep the larger.
        std::vector<cplx> u{cplx(omega), eps[0] - lambda};
        std::vector<cplx> w{eps[1] - lambda, cplx(omega)};
        return vec_norm(u) >= vec_norm(w) ? u : w;
    };

    if (std::abs(f) < kDiscriminantFloor) {
        auto x = vector_for(mid);
        unit_direction(x);
        for (int k = 0; k < 2; ++k) set.pairs.push_back(EigenPair{mid, x, residual(h, mid, x)});
        set.degenerate = true;
        set.gram_condition = std::numeric_limits<double>::infinity();
        return set;
    }

    const cplx root = principal_sqrt(f);
    cplx plus = mid + 0.5 * root;
    cplx minus = mid - 0.5 * root;
    if (omega == 0.0) {
        // Uncoupled: hand back the diagonal entries exactly.
        const cplx d = eps[0] - eps[1];
        const bool first_is_plus = (d.real() > 0.0) || (d.real() == 0.0 && d.imag() >= 0.0);
        plus = first_is_plus ? eps[0] : eps[1];
        minus = first_is_plus ? eps[1] : eps[0];
    }
    for (cplx lambda : {plus, minus}) {
        auto x = vector_for(lambda);
        const double xn = vec_norm(x);
        for (auto& z : x) z /= xn;
        set.pairs.push_back(EigenPair{lambda, x, residual(h, lambda, x)});
    }
    return biorthonormalize(std::move(set));
}

EigenSet eigen_general(const ComplexMatrix& h) {
    const std::size_t n = h.order();
    if (n == 0 || n > kMaxGeneralOrder)
        throw Error(Errc::invalid_model, "general solver supports orders 1.." + std::to_string(kMaxGeneralOrder) +
                                             ", got " + std::to_string(n));
    const auto coeffs = charpoly::coefficients(h);
    const auto roots = charpoly::aberth_roots(coeffs);

    EigenSet set;
    set.matrix_norm = h.norm();
    for (const cplx lambda : roots) {
        auto x = inverse_iteration(h, lambda);
        set.pairs.push_back(EigenPair{lambda, x, residual(h, lambda, x)});
    }

    // Clustered roots of the characteristic polynomial are only accurate to
    // its conditioning; the unconjugated Rayleigh quotient x^T H x / x^T x
    // works on H itself. Kept only when it lowers the residual.
    for (auto& p : set.pairs) {
        const cplx xx = bilinear(p.vector, p.vector);
        if (std::abs(xx) < 1e-8) continue;
        std::vector<cplx> hx(n);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c) hx[r] += h(r, c) * p.vector[c];
        const cplx rq = bilinear(p.vector, hx) / xx;
        if (residual(h, rq, p.vector) >= p.residual) continue;
        p.value = rq;
        p.vector = inverse_iteration(h, rq);
        p.residual = residual(h, rq, p.vector);
    }
    canonical_sort(set.pairs, set.matrix_norm);

    double min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            min_gap = std::min(min_gap, std::abs(set.pairs[i].value - set.pairs[j].value));
    // A defective pair is only resolved to ~sqrt(eps) ||H||, so the gap alone
    // cannot see an exact coalescence; a near self-orthogonal vector can.
    double condition = 1.0;
    for (const auto& p : set.pairs)
        condition = std::max(condition, 1.0 / std::max(std::abs(bilinear(p.vector, p.vector)), 1e-300));
    set.degenerate = n > 1 && (min_gap < kRelativeGapFloor * set.matrix_norm || condition > kMaxGramCondition);
    if (set.degenerate) {
        for (auto& p : set.pairs) unit_direction(p.vector);
        set.gram_condition = std::numeric_limits<double>::infinity();
        return set;
    }
    return biorthonormalize(std::move(set));
}

EigenSet biorthonormalize(EigenSet set) {
    if (set.degenerate)
        throw Error(Errc::degenerate_at_ep, "eigenvalues coalesce; bi-orthonormalization is undefined");
    double condition = 1.0;
    for (auto& p : set.pairs) {
        auto& x = p.vector;
        const std::size_t k = largest_component(x);
        if (x[k] == cplx{}) throw Error(Errc::degenerate_at_ep, "zero eigenvector");
        const cplx pivot = x[k];
        for (auto& z : x) z /= pivot;
        const cplx self = bilinear(x, x);
        const double conj_norm2 = std::real(inner(x, x));
        if (std::abs(self) < 1e2 * kEps * conj_norm2)
            throw Error(Errc::degenerate_at_ep, "eigenvector is self-orthogonal (x^T x = 0)");
        condition = std::max(condition, conj_norm2 / std::abs(self));
        const cplx scale = principal_sqrt(self);
        for (auto& z : x) z /= scale;
        const cplx lead = x[largest_component(x)];
        const bool in_gauge = lead.real() > 0.0 || (lead.real() == 0.0 && lead.imag() > 0.0);
        if (!in_gauge)
            for (auto& z : x) z = -z;
    }
    set.gram_condition = condition;
    set.normalized = true;
    return set;
}

EigenSet solve(const ModelSpec& model, double a) {
    if (model.size() == 2) return eigen2_analytic(model, a);
    return eigen_general(build_matrix(model, a));
}

} // namespace epscope
