#pragma once

/**
 * @file rational.hpp
 * @brief Exact rationals, bounded-denominator enumeration and mediants.
 *
 * Two value types are provided:
 *  - Rational: always reduced, denominator positive. Arbitrary precision.
 *  - Fraction: a numerator/denominator pair that is NOT reduced. The
 *    sequence construction needs specific representatives (4/12 rather
 *    than 1/3), so the pair itself carries information.
 */

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace convexsum {

using BigInt = boost::multiprecision::cpp_int;

class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(long long n) : num_(n), den_(1) {}  // NOLINT(implicit)
    Rational(BigInt n, BigInt d);

    /// Parses "p/q", "p" or "-p/q".
    static Rational parse(const std::string& text);

    const BigInt& num() const { return num_; }
    const BigInt& den() const { return den_; }

    bool is_integer() const { return den_ == 1; }
    long double to_long_double() const;
    double to_double() const { return static_cast<double>(to_long_double()); }
    std::string str() const;

    BigInt floor() const;
    BigInt ceil() const;

    Rational operator-() const;
    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b);
    friend Rational operator*(const Rational& a, const Rational& b);
    friend Rational operator/(const Rational& a, const Rational& b);
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

private:
    BigInt num_;
    BigInt den_;
};

/// Unreduced pair num/den with den >= 1.
struct Fraction {
    BigInt num;
    BigInt den{1};

    Fraction() = default;
    Fraction(BigInt n, BigInt d);
    explicit Fraction(const Rational& r) : num(r.num()), den(r.den()) {}

    Rational value() const { return Rational(num, den); }
    std::string str() const;
};

/// All distinct rationals r with lo <= r <= hi and reduced denominator <= qmax,
/// strictly increasing. Throws std::invalid_argument if lo >= hi or qmax < 1.
std::vector<Rational> enumerate_fractions(const Rational& lo, const Rational& hi,
                                          std::int64_t qmax);

std::size_t count_fractions(const Rational& lo, const Rational& hi, std::int64_t qmax);

/// (a+c)/(b+d), unreduced. Requires f1 < f2.
Fraction mediant(const Fraction& f1, const Fraction& f2);

/// Re-expresses r with the smallest denominator that is a multiple of
/// r.den() and lies in [lo, hi]. Throws ConstructionInfeasible when no
/// such multiple exists.
Fraction expand_to_range(const Rational& r, long double lo, long double hi);

/// Same contract with exact bounds.
Fraction expand_to_range(const Rational& r, const Rational& lo, const Rational& hi);

/// N^alpha as an exact integer when it is one (alpha is matched against
/// rationals p/q with q <= 64 and k^q == N^p is verified exactly).
std::optional<BigInt> exact_integer_power(std::int64_t N, long double alpha);

/// BigInt to int64 when it fits.
std::optional<std::int64_t> to_int64(const BigInt& v);

}  // namespace convexsum
