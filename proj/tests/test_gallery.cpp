#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "mosk/mosk.hpp"
#include "oracles.hpp"

using namespace mosk;
using namespace mosk::gallery;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
const double pi_d = std::numbers::pi;
}

TEST_CASE("staircase evaluation") {
    const auto& p = staircase_params();
    CHECK(staircase_eval(p, Point({-3.0, 7.0})) == Point({0.0, 0.0}));
    const Point t2 = staircase_eval(p, Point({2.0, 0.0}));
    CHECK_THAT(t2[0], WithinAbs(std::sqrt(3.0), 1e-15));
    CHECK_THAT(t2[1], WithinAbs(std::sqrt(3.0) / 2.0, 1e-15));
    CHECK(staircase_eval(p, Point({2.0, 5.0})) == t2);
    CHECK_THROWS_AS(staircase_eval(p, Point({p.a(staircase_cap) + 1.0, 0.0})), OverflowError);
    CHECK_THROWS_AS(staircase_eval(p, Point({1.0})), DimensionMismatch);
}

TEST_CASE("staircase agrees with the extended-precision oracle") {
    const auto& p = staircase_params();
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 300; ++i) {
        const double x = std::ldexp(u(rng), static_cast<int>(i % 38));
        const auto [ox, oy] = oracle::staircase(oracle::big(x));
        const Point t = staircase_eval(p, Point({x, 0.0}));
        CHECK_THAT(t[0], WithinRel(static_cast<double>(ox), 1e-14));
        CHECK_THAT(t[1], WithinRel(static_cast<double>(oy), 1e-13));
    }
}

TEST_CASE("staircase witnesses") {
    CHECK_THAT(staircase_witnesses(5).square_deficit, WithinRel(0.0009765625, 1e-12));
    CHECK_THAT(staircase_witnesses(1).square_deficit, WithinRel(0.25, 1e-12));
    CHECK_THAT(staircase_witnesses(30).gap_norm, WithinAbs(1.0, 1e-6));
    for (int n = 1; n <= static_cast<int>(staircase_cap); ++n) {
        const auto w = staircase_witnesses(static_cast<std::size_t>(n));
        const auto o = oracle::staircase_pair(oracle::staircase_a(n), oracle::staircase_a(n - 1));
        INFO("n = " << n);
        CHECK_THAT(w.square_deficit, WithinRel(std::ldexp(1.0, -2 * n), 1e-12));
        CHECK_THAT(w.square_deficit, WithinRel(o.square_deficit, 1e-12));
        CHECK_THAT(w.gap_norm, WithinRel(o.gap_norm, 1e-12));
        CHECK(w.x == Point({std::ldexp(2.0, n) - 2.0, 0.0}));
    }
    CHECK_THROWS_AS(staircase_witnesses(0), DomainError);
    CHECK_THROWS_AS(staircase_witnesses(staircase_cap + 1), OverflowError);
}

TEST_CASE("staircase difference routine matches the oracle on arbitrary pairs") {
    const auto& p = staircase_params();
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 300; ++i) {
        const double x = std::ldexp(u(rng), static_cast<int>(i % 30)) - 0.5;
        const double y = x + (u(rng) - 0.5) * 6.0;
        const auto d = p.difference(Point({x, 0.0}), Point({y, 0.0}));
        const auto o = oracle::staircase_pair(oracle::big(x), oracle::big(y));
        INFO(x << " " << y);
        CHECK_THAT(d.square_deficit, WithinAbs(o.square_deficit, 1e-12 * std::abs(o.square_deficit) + 1e-14));
        CHECK_THAT(norm(d.gap), WithinAbs(o.gap_norm, 1e-12 * o.gap_norm + 1e-14));
        const Point tx = p.eval(Point({x, 0.0}));
        const Point ty = p.eval(Point({y, 0.0}));
        // the plain subtraction carries rounding proportional to |T x|
        CHECK(distance(d.dT, tx - ty) <= 1e-14 * std::max({1.0, norm(tx), norm(ty)}));
    }
}

TEST_CASE("staircase is a beta_m contraction on D_m") {
    const auto& p = staircase_params();
    std::mt19937_64 rng(2);
    for (std::size_t m = 1; m <= 8; ++m) {
        std::uniform_real_distribution<double> ux(-0.5 * p.a(m), p.a(m));
        std::uniform_real_distribution<double> uy(-3.0, 3.0);
        double worst = 0.0;
        for (int i = 0; i < 10000; ++i) {
            const Point a({ux(rng), uy(rng)});
            const Point b({ux(rng), uy(rng)});
            worst = std::max(worst, distance(p.eval(a), p.eval(b)) / distance(a, b));
        }
        INFO("m = " << m);
        CHECK(worst <= p.beta(m) + 1e-9);
    }
}

TEST_CASE("staircase is globally nonexpansive") {
    auto cfg = SamplerConfig::cube(2, -1e4, 1e4, 100000, 9);
    const auto c = certify_lipschitz(staircase_map(), cfg);
    CHECK(c.verdict == Verdict::consistent);
    CHECK(c.estimates[0].value <= 1.0 + 1e-9);
}

TEST_CASE("clamped sine") {
    CHECK(clamp_sin(0.0) == 0.0);
    CHECK(clamp_sin(10.0) == 1.0);
    CHECK(clamp_sin(-pi_d) == -1.0);
    CHECK(clamp_sin(1.0) == std::sin(1.0));
}

TEST_CASE("g and h inverse solvers") {
    CHECK(g_inverse(0.0) == 0.0);
    CHECK_THAT(g_inverse(1.0 + pi_d / 2), WithinAbs(pi_d / 2, 1e-12));
    const double g1 = oracle::inverse_by_bisection([](long double t) { return t + std::sin(t); }, 1.0, -2.0, 2.0);
    CHECK_THAT(g_inverse(1.0), WithinAbs(g1, 1e-12));
    CHECK_THAT(g_inverse(1.0), WithinAbs(0.510973429388569109520013971145, 1e-12));
    CHECK_THROWS_AS(g_inverse(3.0), DomainError);
    CHECK_THROWS_AS(h_inverse(-1.0), DomainError);

    const double g_hi = pi_d / 2 + 1.0;
    const double h_hi = pi_d / 2 - 1.0;
    for (int i = 0; i <= 10000; ++i) {
        const double s = -1.0 + 2.0 * i / 10000.0;
        const double vg = s * g_hi;
        const double vh = s * h_hi;
        const double tg = g_inverse(vg);
        const double th = h_inverse(vh);
        REQUIRE(std::abs(tg + std::sin(tg) - vg) <= 1e-12);
        REQUIRE(std::abs(th - std::sin(th) - vh) <= 1e-12);
    }
    // near the degenerate point of h the answer still matches the oracle
    for (double v : {1e-12, 1e-9, 1e-6, -1e-6}) {
        const double o = oracle::inverse_by_bisection([](long double t) { return t - std::sin(t); }, v, -2.0, 2.0);
        CHECK_THAT(h_inverse(v), WithinAbs(o, 1e-4 * std::abs(o) + 1e-15));
    }
}

TEST_CASE("closed-form clamp-sin operators") {
    CHECK(clamp_sin_operator_eval(0.0) == 0.0);
    CHECK_THAT(clamp_sin_operator_eval((pi_d + 2) / 4), WithinAbs((pi_d - 2) / 4, 1e-12));
    CHECK(clamp_sin_operator_eval(-2.0) == -1.0);
    for (int i = 0; i <= 1000; ++i) {
        const double x = -5.0 + 0.01 * i;
        REQUIRE_THAT(clamp_sin_operator_eval(clamp_sin_operator_inverse_eval(x)), WithinAbs(x, 1e-10));
        REQUIRE_THAT(clamp_sin_operator_inverse_eval(clamp_sin_operator_eval(x)), WithinAbs(x, 1e-10));
    }
}

TEST_CASE("clamp-sin operator reproduces its resolvent algebra") {
    const auto A = clamp_sin_operator();
    for (int i = 0; i <= 1000; ++i) {
        const double x = -5.0 + 0.01 * i;
        const double j = A.resolvent(Point::scalar(x)).value();
        REQUIRE_THAT(j, WithinAbs((x - clamp_sin(x)) / 2.0, 1e-15));
        REQUIRE_THAT(j + A.evaluate(Point::scalar(j)).value(), WithinAbs(x, 1e-10));
        // the g-based closed form inverts the complementary resolvent (Id + T)/2
        const double k = (x + clamp_sin(x)) / 2.0;
        REQUIRE_THAT(k + clamp_sin_operator_eval(k), WithinAbs(x, 1e-10));
    }
}

TEST_CASE("cubic resolvent") {
    CHECK(cubic_resolvent(0.0) == 0.0);
    CHECK_THAT(cubic_resolvent(2.0), WithinAbs(1.0, 1e-15));
    CHECK_THAT(cubic_resolvent(-10.0), WithinAbs(-2.0, 1e-14));
    for (int i = 0; i <= 10000; ++i) {
        const double x = -1000.0 + 0.2 * i;
        REQUIRE_THAT(cubic_resolvent(x),
                     WithinAbs(solve_scalar_monotone([](double y) { return y * y * y; }, x), 1e-9));
        REQUIRE(cubic_resolvent(-x) == -cubic_resolvent(x));
    }
}

TEST_CASE("mixed-power function") {
    CHECK(quartic_mixed_fprime(-1.0) == -8.0);
    CHECK(quartic_mixed_fprime(0.25) == 0.75);
    CHECK(quartic_mixed_fprime(2.0) == 3.0);
    double prev = -INFINITY;
    for (int i = 0; i <= 100000; ++i) {
        const double x = -3.0 + 6e-5 * i;
        const double v = quartic_mixed_fprime(x);
        REQUIRE(v >= prev);
        prev = v;
        REQUIRE_THAT(quartic_mixed_fprime_inverse(v), WithinAbs(x, 1e-12 * std::max(1.0, std::abs(x))));
    }
    // not strongly monotone: the quotient collapses near the origin
    double inf = INFINITY;
    for (int i = 1; i <= 200; ++i) {
        const double x = -0.1 * i / 200.0;
        const double y = 0.5 * x;
        inf = std::min(inf, (x - y) * (quartic_mixed_fprime(x) - quartic_mixed_fprime(y)) / ((x - y) * (x - y)));
    }
    CHECK(inf <= 0.1);
}

TEST_CASE("Fenchel conjugates") {
    CHECK_THAT(fenchel_conjugate_1d(quartic_entry(), 1.0), WithinAbs(0.75, 1e-12));
    CHECK_THAT(fenchel_conjugate_1d(quartic_mixed_entry(), 1.5), WithinAbs(0.5, 1e-12));
    // conjugate of the clamp-sin antiderivative: reference values computed in 30-digit arithmetic
    CHECK_THAT(clamp_sin_fstar(1.0), WithinAbs(2.0, 1e-12));
    CHECK_THAT(clamp_sin_fstar(0.0), WithinAbs(0.53539816339744830961566084582, 1e-12));
    CHECK_THAT(clamp_sin_fstar(0.1), WithinAbs(0.611135790158754179110485895813, 1e-12));
    CHECK_THAT(clamp_sin_fstar(-2.0), WithinAbs(4.5, 1e-12));
    CHECK_THAT(clamp_sin_fstar_published(1.0), WithinAbs(1.5, 1e-12));

    const auto e = clamp_sin_entry();
    for (int i = 0; i <= 200; ++i) {
        const double s = -4.0 + 0.04 * i;
        REQUIRE_THAT(fenchel_conjugate_1d(e, s), WithinAbs((*e.eval_fstar)(s), 1e-9));
        // Fenchel-Young with equality at s = f'(x)
        const double x = -3.0 + 0.03 * i;
        REQUIRE(e.eval_f(x) + (*e.eval_fstar)(s) >= x * s - 1e-9);
        const double fx = e.eval_fprime(x);
        REQUIRE_THAT(e.eval_f(x) + (*e.eval_fstar)(fx), WithinAbs(x * fx, 1e-9));
    }
}

TEST_CASE("rotator, cone witnesses and shift") {
    CHECK(rotate(Point({1.0, 0.0})) == Point({0.0, 1.0}));
    const auto [s, j] = rotator_ops(Point({2.0, 0.0}));
    CHECK(s == Point({0.0, 2.0}));
    CHECK(j == Point({1.0, -1.0}));
    const auto [a, b] = cone_subdiff_witnesses(1);
    CHECK(a.x == Point({1.0, 0.0}));
    CHECK(a.xstar == Point({2.0, 0.0}));
    CHECK(b.x == Point({1.0, 1.0}));
    CHECK(b.xstar == Point({2.0, 0.0}));
    CHECK(cone_subdiff_coercivity_probe(7) == 2.0);
    CHECK(shift_map(Point({1.0, 0.0, 0.0, 0.0})) == Point({0.0, 1.0, 0.0, 0.0}));
    CHECK(shift_map(Point({1.0, 1.0, 1.0, 1.0})) == Point({0.0, 1.0, 1.0, 1.0}));
    // R_B = -R for the shift operator
    const auto B = shift_operator(4);
    const Point x({1.0, 2.0, 3.0, 4.0});
    CHECK(reflected_resolvent(B, x) == -shift_map(x));
}

TEST_CASE("gallery registry") {
    for (const auto& id : gallery_ids()) {
        const auto e = gallery_entry(id);
        CHECK(e.id == id);
        CHECK(e.dim >= 1);
        if (e.op) CHECK(e.op->dim() == e.dim);
        if (e.map) CHECK(e.map->dim() == e.dim);
    }
    CHECK(gallery_entry("zero", 5).dim == 5);
    CHECK(gallery_entry("cubic", 5).dim == 1);
    CHECK(gallery_entry("shift").dim == default_truncation);
    CHECK_THROWS_AS(gallery_entry("nope"), DomainError);
}

TEST_CASE("every gallery resolvent is firmly nonexpansive") {
    for (const auto& id : gallery_ids()) {
        const auto e = gallery_entry(id, id == "shift" ? std::optional<std::size_t>(8) : std::nullopt);
        if (!e.op) continue;
        auto cfg = SamplerConfig::cube(e.dim, -20.0, 20.0, 20000, 4);
        const auto c = certify_firm(resolvent_map(*e.op), cfg);
        INFO(id);
        CHECK(c.verdict == Verdict::consistent);
        CHECK(c.estimates[0].value <= 1e-9);
    }
}
