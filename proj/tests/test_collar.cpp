#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hypuni/collar.hpp"
#include "hypuni/quadrature.hpp"

using namespace hypuni;
using namespace hypuni::collar;

namespace {
constexpr double kPi = std::numbers::pi;

double u01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}
}  // namespace

TEST_SUITE_BEGIN("collar");

TEST_CASE("rho: values, evenness, domain") {
    CHECK(rho(2.0 * kPi, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(rho(kPi, 1.0) == doctest::Approx(0.56974696366227456).epsilon(1e-14));
    std::mt19937_64 rng(7);
    for (int i = 0; i < 50; ++i) {
        const double ell = 0.1 + 6.0 * u01(rng);
        const double s = (kPi * kPi / ell) * (0.999 * u01(rng));
        CHECK(rho(ell, s) == doctest::Approx(rho(ell, -s)).epsilon(1e-15));
        CHECK(rho(ell, s) > 0.0);
    }
    CHECK_THROWS_AS(rho(2.0, kPi * kPi / 2.0), std::domain_error);
    CHECK_THROWS_AS(rho(-1.0, 0.0), std::domain_error);
}

TEST_CASE("collar half-width X") {
    // ell -> 0: X(ell) * ell -> pi^2
    CHECK(collar_halfwidth_x(1e-8) * 1e-8 == doctest::Approx(kPi * kPi).epsilon(1e-7));
    CHECK(collar_halfwidth_x(2.0 * std::asinh(1.0)) ==
          doctest::Approx(2.7994951705055226).epsilon(1e-14));
    double prev = collar_halfwidth_x(0.05);
    for (double ell = 0.1; ell < 20.0; ell += 0.37) {
        const double x = collar_halfwidth_x(ell);
        CHECK(x < prev);
        prev = x;
    }
    // Remark-style exponential decay: X(ell) <= C ell^{-1} e^{-ell/2}
    for (double ell = 10.0; ell <= 40.0; ell += 1.0) {
        const double scaled = collar_halfwidth_x(ell) * ell * std::exp(0.5 * ell);
        CHECK(scaled > 0.0);
        CHECK(scaled <= 4.2 * kPi);
    }
    CHECK_THROWS_AS(collar_halfwidth_x(0.0), std::domain_error);
}

TEST_CASE("boundary offset Y") {
    CHECK(boundary_offset_y(kPi, 0.5) == doctest::Approx(kPi / 3.0).epsilon(1e-15));
    std::mt19937_64 rng(11);
    for (int i = 0; i < 50; ++i) {
        const double ell = 0.1 + 6.0 * u01(rng);
        const double c = 0.99 * u01(rng);
        CHECK(boundary_offset_y(ell, 0.0) == 0.0);
        const double Y = boundary_offset_y(ell, c);
        CHECK(Y < kPi * kPi / ell);
        CHECK(circle_curvature(ell, Y) == doctest::Approx(c).epsilon(1e-14));
    }
    CHECK_THROWS_AS(boundary_offset_y(1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(boundary_offset_y(1.0, -0.1), std::domain_error);
    CHECK_THROWS_AS(boundary_offset_y(0.0, 0.5), std::domain_error);
}

TEST_CASE("xbar_d") {
    for (double ell : {0.3, 1.0, 4.0})
        CHECK(xbar_d(ell, ell) == doctest::Approx(kPi * kPi / (2.0 * ell)).epsilon(1e-15));
    // large-ell tail is of order ell^{-2}: xbar_d * ell^2 / (2 pi d) -> 1
    const double d = 0.7;
    for (double ell : {1e3, 1e5, 1e7})
        CHECK(xbar_d(ell, d) * ell * ell / (2.0 * kPi * d) ==
              doctest::Approx(1.0).epsilon(1e-5));
    // eliminating c via c = d/L, L = sqrt(ell^2 + d^2) gives Y
    std::mt19937_64 rng(13);
    for (int i = 0; i < 100; ++i) {
        const double ell = 0.05 + 8.0 * u01(rng);
        const double dd = 0.05 + 5.0 * u01(rng);
        const double c = dd / std::hypot(ell, dd);
        CHECK(xbar_d(ell, dd) ==
              doctest::Approx(boundary_offset_y(ell, c)).epsilon(1e-13));
    }
    CHECK_THROWS_AS(xbar_d(1.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(xbar_d(0.0, 1.0), std::domain_error);
}

TEST_CASE("circle curvature: center, monotonicity, finite-difference oracle") {
    CHECK(circle_curvature(3.0, 0.0) == 0.0);
    // odd in s, strictly increasing on [0, pi^2/ell)
    std::mt19937_64 rng(17);
    for (int i = 0; i < 30; ++i) {
        const double ell = 0.2 + 5.0 * u01(rng);
        const double s = (kPi * kPi / ell) * 0.98 * u01(rng);
        CHECK(circle_curvature(ell, -s) ==
              doctest::Approx(-circle_curvature(ell, s)).epsilon(1e-15));
    }
    const double ell = 1.7;
    double prev = circle_curvature(ell, 0.0);
    const double smax = 0.999 * kPi * kPi / ell;
    for (int i = 1; i <= 40; ++i) {
        const double cur = circle_curvature(ell, smax * i / 40.0);
        CHECK(cur > prev);
        prev = cur;
    }
    // k_g = rho^{-2} d_s rho, checked by central differences of rho
    const double h = 1e-5;
    const double fd = (rho(2.0, 1.0 + h) - rho(2.0, 1.0 - h)) / (2.0 * h) /
                      (rho(2.0, 1.0) * rho(2.0, 1.0));
    CHECK(fd == doctest::Approx(std::sin(1.0 / kPi)).epsilon(1e-8));
    CHECK(circle_curvature(2.0, 1.0) ==
          doctest::Approx(0.31296179620778659).epsilon(1e-14));
}

TEST_CASE("halfcollar area: closed form, quadrature oracle, identity") {
    CHECK(halfcollar_area(1.3, 0.0) == 0.0);
    CHECK(halfcollar_area(4.0, 0.6) == doctest::Approx(3.0).epsilon(1e-14));
    // adaptive quadrature of 2 pi int_0^Y rho^2
    const double ell = 2.0, c = 0.7;
    const double Y = boundary_offset_y(ell, c);
    const double quad =
        2.0 * kPi * integrate([&](double s) { return rho(ell, s) * rho(ell, s); },
                              0.0, Y, 1e-13);
    CHECK(quad == doctest::Approx(halfcollar_area(ell, c)).epsilon(1e-10));
    // area = c * L exactly
    std::mt19937_64 rng(19);
    for (int i = 0; i < 100; ++i) {
        const double l = 0.1 + 6.0 * u01(rng);
        const double cc = 0.98 * u01(rng);
        const auto g = lengths_from(l, cc);
        CHECK(halfcollar_area(l, cc) == doctest::Approx(cc * g.L).epsilon(1e-14));
    }
}

TEST_CASE("lengths_from and geodesic_from_boundary") {
    CHECK(geodesic_from_boundary(5.0, 3.0) == doctest::Approx(4.0).epsilon(1e-15));
    const auto g = lengths_from(2.0 * kPi / 3.0, 0.5);
    CHECK(g.L == doctest::Approx(2.4183991523122905).epsilon(1e-14));
    CHECK(g.d == doctest::Approx(1.2091995761561452).epsilon(1e-14));
    CHECK_FALSE(g.near_degenerate);

    const auto g0 = lengths_from(1.3, 0.0);
    CHECK(g0.L == 1.3);
    CHECK(g0.d == 0.0);

    // L^2 - ell^2 = d^2 to round-off, and the inverse returns ell
    std::mt19937_64 rng(23);
    for (int i = 0; i < 200; ++i) {
        const double ell = 0.05 + 8.0 * u01(rng);
        const double c = 0.999 * u01(rng);
        const auto gg = lengths_from(ell, c);
        CHECK(gg.L * gg.L - gg.ell * gg.ell ==
              doctest::Approx(gg.d * gg.d).epsilon(1e-12));
        CHECK(geodesic_from_boundary(gg.L, gg.d) == doctest::Approx(ell).epsilon(1e-12));
    }

    CHECK(lengths_from(1.0, 1.0 - 1e-7).near_degenerate);
    CHECK_THROWS_AS(lengths_from(1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(geodesic_from_boundary(1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(geodesic_from_boundary(0.5, 1.0), std::domain_error);
}

TEST_CASE("cylinder solution") {
    const auto sol = cylinder_solution(kPi, 0.5);
    CHECK(sol.ell == doctest::Approx(2.0943951023931955).epsilon(1e-14));
    CHECK(sol.boundary_length == doctest::Approx(2.4183991523122905).epsilon(1e-14));
    CHECK(sol.momentum == doctest::Approx(1.2091995761561452).epsilon(1e-14));
    CHECK(sol.boundary_length * sol.boundary_length - sol.ell * sol.ell ==
          doctest::Approx(sol.momentum * sol.momentum).epsilon(1e-9));

    // profile solves u'' = e^{2u}; u' = +- c e^u at the two ends
    const double h = 1e-5;
    for (int i = 1; i < 100; ++i) {
        const double s = kPi * i / 100.0;
        const double upp =
            (sol.profile_derivative(s + h) - sol.profile_derivative(s - h)) / (2.0 * h);
        CHECK(std::abs(upp - std::exp(2.0 * sol.profile(s))) <= 1e-9);
    }
    CHECK(sol.profile_derivative(kPi) ==
          doctest::Approx(0.5 * std::exp(sol.profile(kPi))).epsilon(1e-12));
    CHECK(sol.profile_derivative(0.0) ==
          doctest::Approx(-0.5 * std::exp(sol.profile(0.0))).epsilon(1e-12));

    CHECK_THROWS_AS(cylinder_solution(kPi, 0.0), std::domain_error);
    CHECK_THROWS_AS(cylinder_solution(0.0, 0.5), std::domain_error);

    // T -> infinity with fixed d: L decreases monotonically to d
    const double d = 1.0;
    double prevL = 1e300;
    for (double T : {4.0, 8.0, 16.0, 32.0, 64.0, 128.0}) {
        // solve c ell(c) / sqrt(1-c^2) = d on this cylinder by bisection
        double lo = 1e-9, hi = 1.0 - 1e-12;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double mom = cylinder_solution(T, mid).momentum;
            (mom < d ? lo : hi) = mid;
        }
        const double L = cylinder_solution(T, 0.5 * (lo + hi)).boundary_length;
        CHECK(L > d);
        CHECK(L < prevL);
        prevL = L;
    }
    CHECK(prevL == doctest::Approx(d).epsilon(2e-2));
}

TEST_CASE("trace inequality on the half-collar") {
    // w == const is the equality case of the area identity
    {
        const auto p = trace_inequality_check(2.0, 0.5, Polynomial({3.0}));
        CHECK(p.lhs == doctest::Approx(p.rhs).epsilon(1e-10));
        const auto g = lengths_from(2.0, 0.5);
        CHECK(p.lhs == doctest::Approx(3.0 * g.d).epsilon(1e-10));
    }
    {
        const auto p = trace_inequality_check(2.0, 0.5, Polynomial({0.0, 1.0}));
        CHECK(p.lhs <= p.rhs + 1e-10);
    }
    std::mt19937_64 rng(29);
    for (int i = 0; i < 100; ++i) {
        const double ell = 0.3 + 5.0 * u01(rng);
        const double c = 0.05 + 0.9 * u01(rng);
        std::vector<double> coeffs(1 + static_cast<std::size_t>(rng() % 5));
        for (double& x : coeffs) x = 2.0 * u01(rng) - 1.0;
        const auto p = trace_inequality_check(ell, c, Polynomial(coeffs));
        CHECK(p.lhs <= p.rhs + 1e-9);
    }
}

TEST_CASE("horizontal variation derivative vanishes") {
    CHECK(horizontal_variation_derivative(2.0, 0.3, {}) == 0.0);
    // b_0 only: e^{0 s} - 1 = 0
    CHECK(std::abs(horizontal_variation_derivative(2.0, 0.3, {{0, {1.0, 2.0}}})) <=
          1e-12);
    std::mt19937_64 rng(31);
    for (int i = 0; i < 100; ++i) {
        const double ell = 0.5 + 3.5 * u01(rng);
        const double s = (2.0 * u01(rng) - 1.0) * std::min(0.4, 0.9 * kPi * kPi / ell);
        std::vector<FourierMode> modes;
        for (int j = -8; j <= 8; ++j)
            modes.push_back({j, {2.0 * u01(rng) - 1.0, 2.0 * u01(rng) - 1.0}});
        CHECK(std::abs(horizontal_variation_derivative(ell, s, modes)) <= 1e-10);
    }
}

TEST_SUITE_END();
