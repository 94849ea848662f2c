#include "oracles.hpp"

#include "convexsum/convexseq.hpp"
#include "convexsum/errors.hpp"
#include "convexsum/interp.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace convexsum;

namespace {
constexpr double kPi = std::numbers::pi;

ConvexInterpolant two_knots(double y1, InterpMode mode = InterpMode::C1) {
    const std::vector<Knot> k{{0, 0, 0}, {1, y1, 1}};
    ConvexInterpolant f = build_c1(k);
    return mode == InterpMode::C2 ? upgrade_c2(f) : f;
}
}  // namespace

TEST_SUITE("interp") {

TEST_CASE("symmetric pair reproduces x^2/2") {
    const ConvexInterpolant f = two_knots(0.5);
    REQUIRE(f.nodes().size() == 1);
    CHECK(f.nodes()[0].x0 == doctest::Approx(0.5));
    CHECK(f.nodes()[0].p0 == doctest::Approx(0.5));
    for (double x : {0.0, 0.1, 0.25, 0.5, 0.8, 1.0}) {
        const InterpEval e = f.eval(x);
        CHECK(e.f == doctest::Approx(x * x / 2).epsilon(1e-14));
        CHECK(e.fp == doctest::Approx(x).epsilon(1e-14));
    }
    const InterpEval mid = f.eval(0.5);
    CHECK(mid.f == doctest::Approx(0.125));
    CHECK(mid.fpp > 0);
    CHECK(f.D() == doctest::Approx(kPi / 4));

    const ConvexInterpolant g = upgrade_c2(f);
    for (const auto& p : g.pieces()) CHECK(p.alpha == doctest::Approx(kPi / 4).epsilon(1e-12));
    const InterpEval gm = g.eval(0.5);
    CHECK(gm.f == doctest::Approx(0.125).epsilon(1e-12));
}

TEST_CASE("asymmetric pair: node at 2/3 and exact area") {
    const ConvexInterpolant f = two_knots(1.0 / 3);
    CHECK(f.nodes()[0].x0 == doctest::Approx(2.0 / 3).epsilon(1e-15));
    CHECK(f.nodes()[0].p0 == doctest::Approx(1.0 / 3).epsilon(1e-15));
    CHECK(f.eval(1.0).f == doctest::Approx(1.0 / 3).epsilon(1e-15));
    // collinearity: (p2 - p0)/(p0 - p1) = (x0 - x1)/(x2 - x0)
    const auto n = f.nodes()[0];
    CHECK((1 - n.p0) / (n.p0 - 0) == doctest::Approx((n.x0 - 0) / (1 - n.x0)));
    const InterpInvariants inv = check_invariants(upgrade_c2(f));
    CHECK(inv.pass);
    CHECK(inv.max_area_error <= 1e-12);
}

TEST_CASE("solve_x_cot_x") {
    CHECK(solve_x_cot_x(kPi / 4) == doctest::Approx(kPi / 4).epsilon(1e-15));
    CHECK(solve_x_cot_x(0) == doctest::Approx(kPi / 2).epsilon(1e-15));
    const double x = solve_x_cot_x(0.5);
    CHECK(x == doctest::Approx(1.1656).epsilon(1e-4));
    CHECK(std::fabs(x / std::tan(x) - 0.5) <= 1e-12);
    for (double y = 0.01; y < kPi / 4; y += 0.05) {
        const double s = solve_x_cot_x(y);
        CHECK(s >= kPi / 4);
        CHECK(s <= kPi / 2);
        CHECK(std::fabs(s / std::tan(s) - y) <= 1e-12);
    }
    CHECK_THROWS_AS(solve_x_cot_x(-0.1), std::invalid_argument);
    CHECK_THROWS_AS(solve_x_cot_x(0.8), std::invalid_argument);
}

TEST_CASE("C2 upgrade: f'' continuous and equal to D at knots") {
    std::mt19937_64 rng(3);
    const auto knots = oracle::random_knots(rng, 8);
    const ConvexInterpolant g = upgrade_c2(build_c1(knots));
    for (const auto& k : knots) {
        const InterpEval e = g.eval(k.x);
        CHECK(e.f == doctest::Approx(k.y).epsilon(1e-12));
        CHECK(e.fp == doctest::Approx(k.p).epsilon(1e-12));
        CHECK(std::fabs(e.fpp - g.D()) / g.D() <= 1e-6);
    }
    // finite-difference f'' across each interior knot
    for (std::size_t i = 1; i + 1 < knots.size(); ++i) {
        const double h = 1e-7, x = knots[i].x;
        const double fd = (g.eval(x + h).fp - g.eval(x - h).fp) / (2 * h);
        CHECK(std::fabs(fd - g.D()) / g.D() <= 1e-3);
    }
    // alpha cot alpha = D / slope for every piece
    for (const auto& p : g.pieces()) {
        if (p.padding) continue;
        CHECK(std::fabs(p.alpha / std::tan(p.alpha) - g.D() / p.slope()) <= 1e-12);
    }
}

TEST_CASE("finite differences agree with eval") {
    std::mt19937_64 rng(17);
    const auto knots = oracle::random_knots(rng, 6);
    for (InterpMode mode : {InterpMode::C1, InterpMode::C2}) {
        ConvexInterpolant f = build_c1(knots);
        if (mode == InterpMode::C2) f = upgrade_c2(f);
        std::uniform_real_distribution<double> u(knots.front().x + 1e-3, knots.back().x - 1e-3);
        for (int i = 0; i < 200; ++i) {
            const double x = u(rng), h = 1e-6;
            const double dfd = (f.eval(x + h).f - f.eval(x - h).f) / (2 * h);
            CHECK(std::fabs(dfd - f.eval(x).fp) <= 1e-4 * std::fabs(f.eval(x).fp));
            if (mode == InterpMode::C2) {
                const double d2 = (f.eval(x + h).fp - f.eval(x - h).fp) / (2 * h);
                CHECK(std::fabs(d2 - f.eval(x).fpp) <= 1e-4 * f.eval(x).fpp);
            }
        }
    }
}

TEST_CASE("integral of f'' equals p_n - p_1") {
    std::mt19937_64 rng(23);
    const auto knots = oracle::random_knots(rng, 5);
    const ConvexInterpolant g = upgrade_c2(build_c1(knots));
    // composite Simpson per piece
    double total = 0;
    for (const auto& p : g.pieces()) {
        const int m = 2000;
        const double h = p.width() / m;
        double s = p.fsecond(p.x_lo) + p.fsecond(p.x_hi);
        for (int i = 1; i < m; ++i) s += (i % 2 ? 4 : 2) * p.fsecond(p.x_lo + i * h);
        total += s * h / 3;
    }
    CHECK(std::fabs(total - (knots.back().p - knots.front().p)) <= 1e-8);
}

TEST_CASE("non-interpolable knots name the pair") {
    const std::vector<Knot> bad{{0, 0, 0.5}, {1, 1, 1.5}, {2, 1.6, 2.0}};  // second secant 0.6 < 1.5
    try {
        build_c1(bad);
        FAIL("expected NonInterpolable");
    } catch (const NonInterpolable& e) {
        CHECK(e.pair() == 1);
    }
    CHECK_THROWS_AS(build_c1(std::vector<Knot>{{0, 0, 0}, {0, 1, 1}}), NonInterpolable);
    // c far outside [1e-6, 1e6]
    CHECK_THROWS_AS(build_c1(std::vector<Knot>{{0, 0, 0}, {1, 1e-9, 1}}), NonInterpolable);
}

TEST_CASE("eval outside the domain throws unless padded") {
    const ConvexInterpolant f = two_knots(0.5, InterpMode::C2);
    CHECK_THROWS_AS(f.eval(1.5), std::out_of_range);
    const ConvexInterpolant p = extend_right(f, 2.0);
    const InterpEval e = p.eval(1.5);
    CHECK(e.fpp == doctest::Approx(p.D()));
    CHECK(e.fp == doctest::Approx(1 + 0.5 * p.D()));
    CHECK(check_invariants(p).pass);
}

TEST_CASE("knots_from_sequence") {
    const auto q = oracle::quadratic_sequence(12);
    const auto knots = knots_from_sequence(q);
    REQUIRE(knots.size() == 12);
    for (std::size_t i = 0; i < knots.size(); ++i) {
        const double n = static_cast<double>(i + 1);
        CHECK(knots[i].x == doctest::Approx(n / 12));
        CHECK(knots[i].p == doctest::Approx(0.5 + n / 12).epsilon(1e-14));
    }
    const ConvexInterpolant f = build_c1(std::span<const Knot>(knots.data(), 3));
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(std::fabs(f.eval(knots[i].x).f - knots[i].y) <= 1e-12);
        CHECK(std::fabs(f.eval(knots[i].x).fp - knots[i].p) <= 1e-12);
    }

    std::vector<Rational> ap;
    for (int n = 1; n <= 10; ++n) ap.emplace_back(BigInt(n), BigInt(10));
    CHECK_THROWS_AS(knots_from_sequence(oracle::exact_sequence(ap)), std::invalid_argument);
}

TEST_CASE("constructed sequence round-trips through its own knots") {
    const ConvexSequence c = construct_dirichlet_like(256, 1);
    const auto knots = knots_from_sequence(c);
    const ConvexInterpolant f = build_c1(knots);
    for (std::int64_t n = 1; n <= 256; ++n) {
        CHECK(std::fabs(f.eval(static_cast<double>(n) / 256).f - static_cast<double>(c.at(n))) <= 1e-10);
    }
}

TEST_CASE("100 random knot sets pass the invariant suite") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        const auto knots = oracle::random_knots(rng, 3 + trial % 10);
        const ConvexInterpolant c1 = build_c1(knots);
        CHECK(check_invariants(c1).pass);
        const InterpInvariants inv = check_invariants(upgrade_c2(c1));
        CHECK(inv.pass);
        CHECK(inv.max_area_error <= 1e-12);
        CHECK(inv.max_knot_value_error <= 1e-10);
        CHECK(inv.max_knot_slope_error <= 1e-10);
        CHECK(inv.max_knot_fpp_rel_error <= 1e-6);
        CHECK(inv.min_fpp > 0);
    }
}

TEST_CASE("JSON dump re-evaluates bit-identically") {
    std::mt19937_64 rng(9);
    const ConvexInterpolant g = extend_right(upgrade_c2(build_c1(oracle::random_knots(rng, 7))), 3.0);
    const ConvexInterpolant h = interpolant_from_json(nlohmann::json::parse(to_json(g).dump()));
    for (double x = g.x_begin(); x <= g.x_end(); x += 0.013) {
        const InterpEval a = g.eval(x), b = h.eval(x);
        CHECK(a.f == b.f);
        CHECK(a.fp == b.fp);
        CHECK(a.fpp == b.fpp);
    }
    nlohmann::json broken = to_json(g);
    broken.erase("D");
    CHECK_THROWS_WITH_AS(interpolant_from_json(broken), doctest::Contains("D"), std::invalid_argument);
}

}
