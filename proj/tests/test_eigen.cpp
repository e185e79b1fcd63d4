#include <doctest.h>

#include <random>

#include "epscope/charpoly.hpp"
#include "epscope/diagnostics.hpp"
#include "epscope/eigen.hpp"
#include "epscope/error.hpp"
#include "oracles.hpp"

using namespace epscope;

namespace {

const double kACr = 2.0 / 3.0;

ModelSpec fig6(double omega) {
    return uniform_coupling({{{1.0, -1.0 / 3.0}, 0.0}, {{1.0, -5.0 / 12.0}, 0.0}, {{1.0, -0.5}, 0.0}, {{0.0, 1.0}, 0.0}},
                            omega);
}

ComplexMatrix random_symmetric(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    ComplexMatrix h(n);
    for (std::size_t k = 0; k < n; ++k) {
        h(k, k) = cplx(u(rng), -std::abs(u(rng)));
        for (std::size_t l = k + 1; l < n; ++l) h(k, l) = h(l, k) = cplx(0.3 * u(rng), 0.0);
    }
    return h;
}

// ||H x - lambda x|| / ||x||, or ||x^T H - lambda x^T|| / ||x|| for the
// left eigenvector (the bra of conj(x))
double residual(const ComplexMatrix& h, const std::vector<cplx>& x, cplx lambda, bool left) {
    double s = 0.0, nx = 0.0;
    for (std::size_t r = 0; r < h.order(); ++r) {
        cplx acc{};
        for (std::size_t c = 0; c < h.order(); ++c) acc += left ? x[c] * h(c, r) : h(r, c) * x[c];
        acc -= lambda * x[r];
        s += std::norm(acc);
        nx += std::norm(x[r]);
    }
    return std::sqrt(s / nx);
}

} // namespace

TEST_CASE("principal square root branch") {
    CHECK(principal_sqrt(cplx(4.0, 0.0)) == cplx(2.0, 0.0));
    CHECK(std::abs(principal_sqrt(cplx(-1.0, 0.0)) - cplx(0.0, 1.0)) < 1e-16);
    CHECK(std::abs(principal_sqrt(cplx(-1.0, -0.0)) - cplx(0.0, 1.0)) < 1e-16);
    const cplx z = principal_sqrt(cplx(-3.0, -4.0));
    CHECK(z.real() >= 0.0);
    CHECK(std::abs(z * z - cplx(-3.0, -4.0)) < 1e-14);
}

TEST_CASE("discriminant") {
    CHECK(std::abs(discriminant(reference_two_level(1.0), kACr)) < 1e-15);
    CHECK(std::abs(discriminant(two_level({1.0, -0.5}, {0.0, 1.0}, 0.4, 0.4, 0.0), kACr)) < 1e-15);
    const cplx f = discriminant(reference_two_level(0.90), kACr);
    CHECK(std::abs(f - cplx(0.0019, 0.0)) < 1e-15);
}

TEST_CASE("analytic solver at the double pole") {
    const auto set = eigen2_analytic(reference_two_level(1.0), kACr);
    CHECK(set.degenerate);
    CHECK_FALSE(set.normalized);
    for (const auto& p : set.pairs) CHECK(std::abs(p.value - cplx(kACr, -1.05)) < 1e-12);
    CHECK_THROWS_AS(biorthonormalize(set), Error);
}

TEST_CASE("analytic solver limits") {
    const auto uncoupled = two_level({1.0, -0.5}, {0.0, 1.0}, 0.2, 0.7, 0.0);
    for (double a : {0.1, kACr, 1.2}) {
        const auto set = eigen2_analytic(uncoupled, a);
        const auto eps = unperturbed_spectrum(uncoupled, a);
        CHECK(((set.pairs[0].value == eps[0] && set.pairs[1].value == eps[1]) ||
               (set.pairs[0].value == eps[1] && set.pairs[1].value == eps[0])));
    }

    const auto flat = two_level({0.4, 0.0}, {0.4, 0.0}, 0.0, 0.0, 0.05);
    const auto set = eigen2_analytic(flat, 0.0);
    CHECK(std::abs(set.pairs[0].value - 0.45) < 1e-15);
    CHECK(std::abs(set.pairs[1].value - 0.35) < 1e-15);
}

TEST_CASE("analytic eigenpairs against the quadratic formula") {
    oracle::RandomTwoLevel gen(11);
    for (int trial = 0; trial < 500; ++trial) {
        double a = 0.0;
        const auto m = gen.next(a);
        if (std::abs(discriminant(m, a)) < 1e-4) continue;
        const auto set = eigen2_analytic(m, a);
        const auto [lp, lm] = oracle::eigenvalues(oracle::two_level_at(
            m.levels[0].energy(a), m.levels[1].energy(a), m.levels[0].gamma / 2, m.levels[1].gamma / 2,
            m.coupling(0, 1)));
        CHECK(oracle::max_mismatch({set.pairs[0].value, set.pairs[1].value}, {lp, lm}) < 1e-12);
        const auto h = build_matrix(m, a);
        for (const auto& p : set.pairs) CHECK(residual(h, p.vector, p.value, false) < 1e-12);
    }
}

TEST_CASE("general solver on diagonal input") {
    ComplexMatrix h(3);
    h(0, 0) = cplx(0.5, -0.1);
    h(1, 1) = cplx(-0.2, 0.0);
    h(2, 2) = cplx(0.9, -0.3);
    const auto set = eigen_general(h);
    CHECK(std::abs(set.pairs[0].value - cplx(-0.2, 0.0)) < 1e-15);
    CHECK(std::abs(set.pairs[1].value - h(0, 0)) < 1e-14);
    CHECK(std::abs(set.pairs[2].value - h(2, 2)) < 1e-14);
    const std::size_t basis[3] = {1, 0, 2};
    for (std::size_t k = 0; k < 3; ++k)
        for (std::size_t j = 0; j < 3; ++j)
            CHECK(std::abs(set.pairs[k].vector[j] - (j == basis[k] ? 1.0 : 0.0)) < 1e-12);
}

TEST_CASE("four-level discrete model at a = 1.3") {
    const auto h = build_matrix(fig6(0.05), 1.3);
    const auto set = eigen_general(h);
    REQUIRE(set.size() == 4);
    const auto coeffs = charpoly::coefficients(h);
    ComplexMatrix shifted = h;
    for (std::size_t k = 0; k < 4; ++k) {
        const auto& p = set.pairs[k];
        CHECK(std::abs(p.value.imag()) < 1e-12);
        CHECK(p.residual <= 1e-10 * h.norm());
        if (k) CHECK(set.pairs[k - 1].value.real() < p.value.real());
        // independent check: det(H - lambda) through LU
        shifted = h;
        for (std::size_t d = 0; d < 4; ++d) shifted(d, d) -= p.value;
        CHECK(std::abs(charpoly::determinant(shifted)) < 1e-9);
        CHECK(std::abs(charpoly::evaluate(coeffs, p.value).value) < 1e-9);
    }
    std::vector<cplx> got;
    for (const auto& p : set.pairs) got.push_back(p.value);
    CHECK(oracle::max_mismatch(got, oracle::spectrum(h)) < 1e-12);
}

TEST_CASE("characteristic polynomial and roots") {
    ComplexMatrix h(3);
    h(0, 0) = 1.0;
    h(1, 1) = 2.0;
    h(2, 2) = 3.0;
    const auto c = charpoly::coefficients(h);
    REQUIRE(c.size() == 4);
    CHECK(std::abs(c[0] - cplx(-6.0)) < 1e-14);
    CHECK(std::abs(c[1] - cplx(11.0)) < 1e-14);
    CHECK(std::abs(c[2] - cplx(-6.0)) < 1e-14);
    CHECK(c[3] == cplx(1.0));
    auto roots = charpoly::aberth_roots(c);
    std::sort(roots.begin(), roots.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
    for (int k = 0; k < 3; ++k) CHECK(std::abs(roots[k] - cplx(k + 1.0)) < 1e-12);

    std::mt19937_64 rng(3);
    for (std::size_t n : {3, 4, 5, 7, 10}) {
        const auto m = random_symmetric(rng, n);
        const auto cm = charpoly::coefficients(m);
        for (cplx z : {cplx(0.3, 0.1), cplx(-1.0, 0.5)}) {
            ComplexMatrix s = m;
            for (std::size_t d = 0; d < n; ++d) s(d, d) -= z;
            const cplx det = charpoly::determinant(s);
            const cplx p = charpoly::evaluate(cm, z).value * (n % 2 ? -1.0 : 1.0);
            CHECK(std::abs(p - det) < 1e-12 * std::max(1.0, std::abs(det)));
        }
    }
}

TEST_CASE("general solver agrees with the analytic one on random two-level models") {
    oracle::RandomTwoLevel gen(2024);
    int compared = 0;
    while (compared < 1000) {
        double a = 0.0;
        const auto m = gen.next(a);
        if (std::abs(discriminant(m, a)) <= 1e-4) continue;
        ++compared;
        const auto an = eigen2_analytic(m, a);
        const auto ge = eigen_general(build_matrix(m, a));
        CHECK(oracle::max_mismatch({ge.pairs[0].value, ge.pairs[1].value}, {an.pairs[0].value, an.pairs[1].value}) <=
              1e-10);
    }
}

TEST_CASE("residuals, left eigenvectors, trace and Gram identity") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 2 + trial % 9;
        const auto h = random_symmetric(rng, n);
        const auto set = eigen_general(h);
        if (set.degenerate) continue;
        cplx trace{}, sum{};
        for (std::size_t k = 0; k < n; ++k) trace += h(k, k);
        for (const auto& p : set.pairs) {
            sum += p.value;
            CHECK(residual(h, p.vector, p.value, false) <= 1e-10 * h.norm());
            CHECK(residual(h, p.vector, p.value, true) <= 1e-10 * h.norm());
        }
        CHECK(std::abs(sum - trace) <= 1e-12 * std::max(1.0, h.norm()));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                CHECK(std::abs(bilinear(set.pairs[i].vector, set.pairs[j].vector) - (i == j ? 1.0 : 0.0)) <
                      1e-10 * set.gram_condition);
        std::vector<cplx> got;
        for (const auto& p : set.pairs) got.push_back(p.value);
        CHECK(oracle::max_mismatch(got, oracle::spectrum(h)) < 1e-10);
    }
}

TEST_CASE("spectrum does not depend on the sign of the coupling") {
    oracle::RandomTwoLevel gen(5);
    for (int trial = 0; trial < 200; ++trial) {
        double a = 0.0;
        auto m = gen.next(a);
        if (std::abs(discriminant(m, a)) < 1e-6) continue;
        const auto plus = solve(m, a);
        m.coupling(0, 1) = m.coupling(1, 0) = -m.coupling(0, 1);
        const auto minus = solve(m, a);
        CHECK(oracle::max_mismatch({plus.pairs[0].value, plus.pairs[1].value},
                                   {minus.pairs[0].value, minus.pairs[1].value}) < 1e-14);
    }
    // N > 2: only sign patterns reachable by flipping basis states leave the
    // spectrum alone (the product w12 w23 w31 is an invariant)
    const auto m4 = fig6(0.1);
    auto m4n = m4;
    for (std::size_t l = 0; l < 3; ++l) m4n.coupling(3, l) = m4n.coupling(l, 3) = -m4.coupling(3, l);
    for (double a : {0.3, 0.7, 1.1}) {
        const auto p = solve(m4, a), q = solve(m4n, a);
        for (std::size_t k = 0; k < 4; ++k) CHECK(std::abs(p.pairs[k].value - q.pairs[k].value) < 1e-12);
    }
}

TEST_CASE("bi-orthonormalization") {
    // Hermitian limit: unconjugated and conjugated norms coincide
    const auto real = eigen2_analytic(reference_two_level(0.0), 0.5);
    for (const auto& p : real.pairs) CHECK(std::abs(inner(p.vector, p.vector) - bilinear(p.vector, p.vector)) < 1e-14);

    // close to the double pole the conjugated norm grows
    const auto near = eigen2_analytic(reference_two_level(1.0), 0.6669);
    REQUIRE(near.normalized);
    CHECK(inner(near.pairs[0].vector, near.pairs[0].vector).real() > 5.0);
    CHECK(near.gram_condition > 5.0);

    // gauge: largest component has argument in (-pi/2, pi/2]
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 100; ++trial) {
        const auto set = eigen_general(random_symmetric(rng, 4));
        for (const auto& p : set.pairs) {
            const auto big = *std::max_element(p.vector.begin(), p.vector.end(),
                                               [](cplx x, cplx y) { return std::abs(x) < std::abs(y); });
            const double arg = std::arg(big);
            CHECK(arg > -M_PI / 2);
            CHECK(arg <= M_PI / 2 + 1e-15);
        }
    }

    // analytic and general vectors agree exactly up to the shared gauge
    const auto m = reference_two_level(0.9);
    const auto an = eigen2_analytic(m, 0.61);
    const auto ge = eigen_general(build_matrix(m, 0.61));
    for (const auto& p : an.pairs) {
        const auto& q = std::abs(ge.pairs[0].value - p.value) < std::abs(ge.pairs[1].value - p.value) ? ge.pairs[0]
                                                                                                     : ge.pairs[1];
        for (std::size_t j = 0; j < 2; ++j) CHECK(std::abs(p.vector[j] - q.vector[j]) < 1e-10);
    }
}

TEST_CASE("general solver rejects oversized matrices and flags coalescence") {
    CHECK_THROWS_AS(eigen_general(ComplexMatrix(kMaxGeneralOrder + 1)), Error);
    const auto set = eigen_general(build_matrix(reference_two_level(1.0), kACr));
    CHECK(set.degenerate);
    CHECK(std::abs(set.pairs[0].value - cplx(kACr, -1.05)) < 1e-6);
}
