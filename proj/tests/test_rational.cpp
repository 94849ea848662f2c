#include "oracles.hpp"

#include "convexsum/errors.hpp"
#include "convexsum/rational.hpp"

#include <doctest.h>

#include <random>

using namespace convexsum;

namespace {
Rational R(const char* s) { return Rational::parse(s); }
std::vector<std::string> strs(const std::vector<Rational>& v) {
    std::vector<std::string> out;
    for (const auto& r : v) out.push_back(r.str());
    return out;
}
}  // namespace

TEST_SUITE("rational") {

TEST_CASE("rationals are kept reduced with a positive denominator") {
    const Rational r{BigInt(6), BigInt(-4)};
    CHECK(r.num() == -3);
    CHECK(r.den() == 2);
    CHECK(R("4/12") == R("1/3"));
    CHECK((R("1/3") + R("1/6")) == R("1/2"));
    CHECK((R("2/3") * R("3/4")) == R("1/2"));
    CHECK((R("1/2") / R("1/4")) == Rational(2));
    CHECK(R("-7/2").floor() == -4);
    CHECK(R("-7/2").ceil() == -3);
    CHECK(R("1/3") < R("1/2"));
    CHECK_THROWS(R("1/0"));
    CHECK_THROWS_AS(R("x/2"), std::invalid_argument);
}

TEST_CASE("enumerate_fractions examples") {
    CHECK(strs(enumerate_fractions(R("1/3"), R("2/3"), 3)) == std::vector<std::string>{"1/3", "1/2", "2/3"});
    CHECK(strs(enumerate_fractions(R("1"), R("2"), 3)) == std::vector<std::string>{"1", "4/3", "3/2", "5/3", "2"});
    CHECK(enumerate_fractions(R("1/3"), R("2/3"), 1).empty());
    CHECK_THROWS_AS(enumerate_fractions(R("2/3"), R("1/3"), 3), std::invalid_argument);
    CHECK_THROWS_AS(enumerate_fractions(R("1/3"), R("1/3"), 3), std::invalid_argument);
}

TEST_CASE("count_fractions examples") {
    CHECK(count_fractions(R("1"), R("2"), 3) == 5);
    CHECK(count_fractions(R("1"), R("2"), 1) == 2);
    const double density = static_cast<double>(count_fractions(R("100"), R("200"), 10)) / (100.0 * 10 * 10);
    CHECK(density >= 0.15);
    CHECK(density <= 0.6);
}

TEST_CASE("enumeration matches the brute-force double loop") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 60; ++trial) {
        const std::int64_t qmax = std::uniform_int_distribution<std::int64_t>(1, 60)(rng);
        const std::int64_t d = std::uniform_int_distribution<std::int64_t>(1, 40)(rng);
        const std::int64_t a = std::uniform_int_distribution<std::int64_t>(-200, 200)(rng);
        const std::int64_t w = std::uniform_int_distribution<std::int64_t>(1, 80)(rng);
        const Rational lo{BigInt(a), BigInt(d)}, hi{BigInt(a + w), BigInt(d)};
        CHECK(enumerate_fractions(lo, hi, qmax) == oracle::brute_force_fractions(lo, hi, qmax));
    }
}

TEST_CASE("consecutive fractions are at least 1/(den den') apart") {
    const auto fr = enumerate_fractions(R("1/7"), R("5/3"), 40);
    REQUIRE(fr.size() > 10);
    for (std::size_t i = 0; i + 1 < fr.size(); ++i) {
        CHECK(fr[i] < fr[i + 1]);
        CHECK(fr[i + 1] - fr[i] >= Rational(BigInt(1), fr[i].den() * fr[i + 1].den()));
    }
}

TEST_CASE("mediant") {
    CHECK(mediant(Fraction(1, 2), Fraction(2, 3)).str() == "3/5");
    const Fraction m = mediant(Fraction(4, 12), Fraction(6, 12));
    CHECK(m.num == 10);
    CHECK(m.den == 24);
    CHECK(mediant(Fraction(0, 1), Fraction(1, 1)).str() == "1/2");
    CHECK_THROWS_AS(mediant(Fraction(2, 3), Fraction(1, 2)), std::invalid_argument);
    CHECK_THROWS_AS(mediant(Fraction(1, 2), Fraction(2, 4)), std::invalid_argument);

    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> d(1, 50), n(-50, 50);
    for (int i = 0; i < 200; ++i) {
        Fraction a(n(rng), d(rng)), b(n(rng), d(rng));
        if (a.value() == b.value()) continue;
        if (a.value() > b.value()) std::swap(a, b);
        const Rational v = mediant(a, b).value();
        CHECK(a.value() < v);
        CHECK(v < b.value());
    }
}

TEST_CASE("expand_to_range") {
    const Fraction a = expand_to_range(R("1/2"), 4.0L, 8.0L);
    CHECK(a.num == 2);
    CHECK(a.den == 4);
    const Fraction b = expand_to_range(R("1/3"), 10.67L, 21.33L);
    CHECK(b.num == 4);
    CHECK(b.den == 12);
    CHECK_THROWS_AS(expand_to_range(R("2/3"), 2.0L, 2.5L), ConstructionInfeasible);
    const Fraction c = expand_to_range(R("1/3"), R("32/3"), R("64/3"));
    CHECK(c.den == 12);

    for (std::int64_t q = 1; q <= 30; ++q) {
        for (std::int64_t p = 1; p < q; ++p) {
            const Rational r{BigInt(p), BigInt(q)};
            const long double lo = static_cast<long double>(q) * 1.7L;
            const Fraction f = expand_to_range(r, lo, 2 * lo);
            CHECK(f.value() == r);
            CHECK(static_cast<long double>(f.den) >= lo);
            CHECK(static_cast<long double>(f.den) <= 2 * lo);
        }
    }
}

TEST_CASE("exact_integer_power") {
    CHECK(exact_integer_power(64, 1.0L) == BigInt(64));
    CHECK(exact_integer_power(64, 0.5L) == BigInt(8));
    CHECK(exact_integer_power(4096, 1.0L / 3) == BigInt(16));
    CHECK(exact_integer_power(4096, 2.0L) == BigInt(4096) * 4096);
    CHECK_FALSE(exact_integer_power(128, 0.5L).has_value());
    CHECK(exact_integer_power(7, 0.0L) == BigInt(1));
}

}
