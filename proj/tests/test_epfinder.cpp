#include <doctest.h>

#include "epscope/diagnostics.hpp"
#include "epscope/epfinder.hpp"
#include "epscope/error.hpp"

using namespace epscope;

namespace {

const double kACr = 2.0 / 3.0;

Errc code_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error raised");
    return Errc::config;
}

ModelSpec fig6_open() {
    auto m = uniform_coupling({{{1.0, -1.0 / 3.0}, 0.0}, {{1.0, -5.0 / 12.0}, 0.0}, {{1.0, -0.5}, 2.0}, {{0.0, 1.0}, 2.2}},
                              0.05);
    return m;
}

} // namespace

TEST_CASE("analytic branch point of the double-pole model") {
    const auto bp = locate_ep_2level(reference_two_level(1.0));
    CHECK(std::abs(bp.a_cr - kACr) < 1e-15);
    REQUIRE(bp.omega_cr);
    CHECK(std::abs(*bp.omega_cr - 0.05) < 1e-15);
    CHECK(std::abs(bp.X - cplx(kACr, -1.05)) < 1e-15);
    CHECK(bp.residual < 1e-15);
}

TEST_CASE("analytic branch point edge cases") {
    const auto equal = two_level({1.0, -0.5}, {0.0, 1.0}, 0.7, 0.7, 0.05);
    const auto bp = locate_ep_2level(equal);
    CHECK(*bp.omega_cr == 0.0);
    CHECK(code_of([&] { locate_ep_2level(equal, SolveFor::gamma_scale); }) == Errc::degenerate_widths);

    const auto parallel = two_level({1.0, 0.5}, {0.0, 0.5}, 1.0, 1.1, 0.05);
    CHECK(code_of([&] { locate_ep_2level(parallel); }) == Errc::no_crossing);

    const auto scaled = locate_ep_2level(reference_two_level(0.90), SolveFor::gamma_scale);
    REQUIRE(scaled.gamma_scale);
    CHECK(std::abs(*scaled.gamma_scale - 10.0 / 9.0) < 1e-12);
    CHECK(scaled.residual < 1e-15);
    const auto at_given = locate_ep_2level(reference_two_level(0.90));
    CHECK(std::abs(*at_given.omega_cr - 0.045) < 1e-15);
}

TEST_CASE("numeric search reproduces the analytic branch point") {
    const auto m = reference_two_level(1.0);
    const auto analytic = locate_ep_2level(m);

    const auto by_coupling = locate_ep_numeric(m, {0, 1}, {0.5, 0.8, 0.5, 1.7}, {ScaleTarget::Kind::coupling, 0, 1});
    CHECK(std::abs(by_coupling.a_cr - analytic.a_cr) < 1e-6);
    CHECK(std::abs(*by_coupling.omega_cr - *analytic.omega_cr) < 1e-6);

    const auto m9 = reference_two_level(0.90);
    const auto by_width = locate_ep_numeric(m9, {0, 1}, {0.5, 0.8, 0.8, 1.4}, {});
    CHECK(std::abs(by_width.a_cr - kACr) < 1e-6);
    CHECK(std::abs(*by_width.gamma_scale - 10.0 / 9.0) < 1e-6);
    CHECK(std::abs(by_width.X - locate_ep_2level(m9, SolveFor::gamma_scale).X) < 1e-6);
}

TEST_CASE("numeric search failures") {
    const auto discrete = reference_two_level(0.0);
    const ScaleTarget coupling{ScaleTarget::Kind::coupling, 0, 1};
    // omega scaled over [0.01, 0.1]
    CHECK(code_of([&] { locate_ep_numeric(discrete, {0, 1}, {0.4, 0.9, 0.2, 2.0}, coupling); }) ==
          Errc::gap_floor_not_reached);

    // box misses the branch point: the best gap sits on the boundary, above the floor
    const auto m = reference_two_level(1.0);
    CHECK(code_of([&] { locate_ep_numeric(m, {0, 1}, {0.5, 0.8, 0.2, 0.9}, coupling); }) ==
          Errc::gap_floor_not_reached);
    CHECK(code_of([&] { locate_ep_numeric(m, {0, 1}, {0.7, 0.9, 0.5, 1.5}, coupling); }) ==
          Errc::gap_floor_not_reached);
    // branch point on the boundary
    CHECK(code_of([&] { locate_ep_numeric(m, {0, 1}, {kACr, 0.8, 0.5, 1.5}, coupling); }) == Errc::not_bracketed);
    CHECK(code_of([&] { locate_ep_numeric(m, {0, 1}, {0.5, 0.8, 1.0, 1.5}, coupling); }) == Errc::not_bracketed);
    CHECK(code_of([&] { locate_ep_numeric(m, {0, 1}, {0.9, 0.7, 0.5, 1.5}, coupling); }) == Errc::not_bracketed);
    CHECK(code_of([&] { locate_ep_numeric(m, {0, 2}, {0.5, 0.8, 0.5, 1.5}, coupling); }) == Errc::invalid_model);
}

TEST_CASE("four-level branch point of levels 3 and 4") {
    const auto m = fig6_open();
    const auto bp = locate_ep_numeric(m, {2, 3}, {0.5, 0.9, 0.5, 1.5}, {});
    REQUIRE(bp.gamma_scale);
    const auto at = scaled_model(m, {}, *bp.gamma_scale);
    CHECK(bp.residual <= 1e-8 * build_matrix(at, bp.a_cr).norm());
    CHECK(pair_gap(at, bp.a_cr, 2, 3) <= 1e-8 * build_matrix(at, bp.a_cr).norm());

    // the conjugated norm of the coalescing pair diverges towards the point
    double prev = 0.0;
    for (double h : {1e-2, 1e-3, 1e-4}) {
        const auto set = eigen_general(build_matrix(at, bp.a_cr + h));
        const auto bm = biorth_measures(set);
        const auto by_state = assign_states(set);
        const double A = bm.A[by_state[3]];
        CHECK(A > prev);
        prev = A;
    }
    CHECK(prev > 10.0);
}

TEST_CASE("signatures of a square-root branch point") {
    const auto m = reference_two_level(1.0);
    const auto bp = locate_ep_2level(m);
    double prev = 1e300;
    for (double h : {1e-4, 1e-5, 1e-6}) {
        const double d = ep_vector_relation(solve(m, bp.a_cr + h));
        CHECK(d < prev);
        prev = d;
    }

    for (double sign : {1.0, -1.0}) {
        auto split = [&](double h) {
            const auto s = solve(m, bp.a_cr + sign * h);
            return std::abs(s.pairs[0].value - s.pairs[1].value);
        };
        for (double h = 1e-6; h < 1e-2; h *= 10.0) {
            const double ratio = split(10.0 * h) / split(h) / std::sqrt(10.0);
            CHECK(ratio > 1.0 / 1.2);
            CHECK(ratio < 1.2);
        }
    }
}

TEST_CASE("pair gap matches the eigenvalue difference") {
    const auto m = reference_two_level(0.9);
    for (double a : {0.3, 0.6, 0.7}) {
        const auto s = solve(m, a);
        CHECK(std::abs(pair_gap(m, a, 0, 1) - std::abs(s.pairs[0].value - s.pairs[1].value)) < 1e-12);
    }
}
