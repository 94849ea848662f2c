#include "convexsum/rational.hpp"

#include "convexsum/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace convexsum {

namespace {

BigInt gcd_big(BigInt a, BigInt b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    return boost::multiprecision::gcd(a, b);
}

// floor(a / b) for b > 0.
BigInt floor_div(const BigInt& a, const BigInt& b) {
    BigInt q = a / b;  // truncates toward zero
    if (a % b != 0 && a < 0) q -= 1;
    return q;
}

}  // namespace

Rational::Rational(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) {
    if (den_ == 0) throw std::domain_error("rational with zero denominator");
    if (den_ < 0) {
        num_ = -num_;
        den_ = -den_;
    }
    BigInt g = gcd_big(num_, den_);
    if (g > 1) {
        num_ /= g;
        den_ /= g;
    }
    if (num_ == 0) den_ = 1;
}

Rational Rational::parse(const std::string& text) {
    auto slash = text.find('/');
    try {
        if (slash == std::string::npos) return Rational(BigInt(text), BigInt(1));
        return Rational(BigInt(text.substr(0, slash)), BigInt(text.substr(slash + 1)));
    } catch (const std::domain_error&) {
        throw;
    } catch (const std::exception&) {
        throw std::invalid_argument("malformed rational '" + text + "'");
    }
}

long double Rational::to_long_double() const {
    // Scale so that both parts fit comfortably before the division.
    const unsigned nb = num_ == 0 ? 0 : boost::multiprecision::msb(boost::multiprecision::abs(num_));
    const unsigned db = boost::multiprecision::msb(den_);
    const unsigned limit = 16000;
    if (nb < limit && db < limit) {
        return static_cast<long double>(num_) / static_cast<long double>(den_);
    }
    const unsigned shift = std::max(nb, db) - 128;
    BigInt n = num_ >> shift;
    BigInt d = den_ >> shift;
    if (d == 0) return num_ > 0 ? std::numeric_limits<long double>::infinity()
                                : -std::numeric_limits<long double>::infinity();
    return static_cast<long double>(n) / static_cast<long double>(d);
}

std::string Rational::str() const {
    if (den_ == 1) return num_.str();
    return num_.str() + "/" + den_.str();
}

BigInt Rational::floor() const { return floor_div(num_, den_); }

BigInt Rational::ceil() const { return -floor_div(-num_, den_); }

Rational Rational::operator-() const {
    Rational r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
}

Rational operator+(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.num_, a.den_ * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::domain_error("division by zero rational");
    return Rational(a.num_ * b.den_, a.den_ * b.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const BigInt lhs = a.num_ * b.den_;
    const BigInt rhs = b.num_ * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

Fraction::Fraction(BigInt n, BigInt d) : num(std::move(n)), den(std::move(d)) {
    if (den < 1) throw std::invalid_argument("fraction denominator must be >= 1");
}

std::string Fraction::str() const { return num.str() + "/" + den.str(); }

std::optional<std::int64_t> to_int64(const BigInt& v) {
    if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
        return std::nullopt;
    return static_cast<std::int64_t>(v);
}

std::vector<Rational> enumerate_fractions(const Rational& lo, const Rational& hi, std::int64_t qmax) {
    if (!(lo < hi)) throw std::invalid_argument("enumerate_fractions: empty interval (lo >= hi)");
    if (qmax < 1) throw std::invalid_argument("enumerate_fractions: qmax must be >= 1");

    // Scan denominators, keep p/q only when already reduced; every distinct
    // rational then appears exactly once (under its reduced denominator).
    struct Item {
        std::int64_t p;
        std::int64_t q;
    };
    std::vector<Item> items;
    for (std::int64_t q = 1; q <= qmax; ++q) {
        const Rational qr(q);
        const auto p_lo = to_int64((lo * qr).ceil());
        const auto p_hi = to_int64((hi * qr).floor());
        if (!p_lo || !p_hi || *p_hi > (std::int64_t{1} << 62) / qmax ||
            *p_lo < -(std::int64_t{1} << 62) / qmax)
            throw std::invalid_argument("enumerate_fractions: bounds too large for the scan");
        for (std::int64_t p = *p_lo; p <= *p_hi; ++p) {
            if (std::gcd(p < 0 ? -p : p, q) == 1) items.push_back({p, q});
        }
    }
    std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
        return static_cast<__int128>(a.p) * b.q < static_cast<__int128>(b.p) * a.q;
    });
    std::vector<Rational> out;
    out.reserve(items.size());
    for (const auto& it : items) out.emplace_back(BigInt(it.p), BigInt(it.q));
    return out;
}

std::size_t count_fractions(const Rational& lo, const Rational& hi, std::int64_t qmax) {
    return enumerate_fractions(lo, hi, qmax).size();
}

Fraction mediant(const Fraction& f1, const Fraction& f2) {
    if (!(f1.value() < f2.value())) throw std::invalid_argument("mediant: requires f1 < f2");
    return Fraction(f1.num + f2.num, f1.den + f2.den);
}

Fraction expand_to_range(const Rational& r, long double lo, long double hi) {
    if (!(lo > 0) || !(hi >= lo)) throw std::invalid_argument("expand_to_range: need 0 < lo <= hi");
    const auto q = to_int64(r.den());
    if (!q) throw ConstructionInfeasible("expand_to_range: denominator too large");
    const long double m = std::ceil(lo / static_cast<long double>(*q));
    const long double den = m * static_cast<long double>(*q);
    if (den > hi)
        throw ConstructionInfeasible("expand_to_range: no multiple of " + r.den().str() +
                                     " in the requested denominator range");
    const auto k = static_cast<std::int64_t>(m);
    return Fraction(r.num() * k, r.den() * k);
}

Fraction expand_to_range(const Rational& r, const Rational& lo, const Rational& hi) {
    if (!(lo > Rational(0)) || hi < lo) throw std::invalid_argument("expand_to_range: need 0 < lo <= hi");
    const BigInt k = (lo / Rational(r.den(), 1)).ceil();
    const BigInt den = k * r.den();
    if (Rational(den, 1) > hi)
        throw ConstructionInfeasible("expand_to_range: no multiple of " + r.den().str() +
                                     " in the requested denominator range");
    return Fraction(r.num() * k, den);
}

std::optional<BigInt> exact_integer_power(std::int64_t N, long double alpha) {
    if (N < 1 || alpha < 0) return std::nullopt;
    if (N == 1) return BigInt(1);
    for (std::int64_t q = 1; q <= 64; ++q) {
        const long double pq = alpha * static_cast<long double>(q);
        const long double p = std::nearbyint(pq);
        if (std::fabs(pq - p) > 1e-12L * std::max<long double>(1, pq)) continue;
        const auto pi = static_cast<unsigned>(p);
        const long double approx = std::pow(static_cast<long double>(N), alpha);
        if (approx > 9e18L) return std::nullopt;
        const BigInt k(static_cast<long long>(std::nearbyint(approx)));
        if (boost::multiprecision::pow(k, static_cast<unsigned>(q)) ==
            boost::multiprecision::pow(BigInt(N), pi))
            return k;
        return std::nullopt;
    }
    return std::nullopt;
}

}  // namespace convexsum
