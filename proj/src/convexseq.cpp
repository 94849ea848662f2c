#include "convexsum/convexseq.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace convexsum {

ConvexSequence::ConvexSequence(std::int64_t N, std::vector<long double> values,
                               std::optional<std::vector<Rational>> exact, std::vector<HitCertificate> hits,
                               SequenceMetadata meta, long double theta)
    : N_(N),
      values_(std::move(values)),
      exact_(std::move(exact)),
      hits_(std::move(hits)),
      meta_(std::move(meta)),
      theta_(theta) {
    if (N_ < 1) throw std::invalid_argument("sequence parameter N must be positive");
    if (values_.size() != static_cast<std::size_t>(N_))
        throw std::invalid_argument("sequence length must equal N");
    if (exact_ && exact_->size() != values_.size())
        throw std::invalid_argument("exact values must have length N");
    if (!(theta_ > 0 && theta_ <= 1)) throw std::invalid_argument("theta must lie in (0, 1]");
}

namespace {

double tightest(double fmin, double fmax, double smin, double smax) {
    if (!(fmin > 0) || !(smin > 0)) return std::numeric_limits<double>::infinity();
    return std::max({1.0, 1.0 / fmin, fmax, 1.0 / smin, smax});
}

}  // namespace

ConvexityReport validate(const ConvexSequence& seq) {
    const std::int64_t N = seq.N();
    if (N < 3) throw std::invalid_argument("validate: N < 3, second differences undefined");
    ConvexityReport r;
    const auto n = static_cast<std::size_t>(N);

    if (seq.exact_values() && seq.theta() == 1) {
        const auto& a = *seq.exact_values();
        const Rational Nr(N), N2(BigInt(BigInt(N) * N), BigInt(1));
        Rational fmin, fmax, smin, smax;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const Rational d = (a[i + 1] - a[i]) * Nr;
            if (i == 0 || d < fmin) fmin = d;
            if (i == 0 || d > fmax) fmax = d;
        }
        for (std::size_t i = 0; i + 2 < n; ++i) {
            const Rational d2 = (a[i + 2] - Rational(2) * a[i + 1] + a[i]) * N2;
            if (i == 0 || d2 < smin) smin = d2;
            if (i == 0 || d2 > smax) smax = d2;
        }
        r.first_diff_min = fmin.to_double();
        r.first_diff_max = fmax.to_double();
        r.second_diff_min = smin.to_double();
        r.second_diff_max = smax.to_double();
        const Rational quarter(BigInt(1), BigInt(4)), four(4);
        r.pass = fmin >= quarter && fmax <= four && smin >= quarter && smax <= four;
        r.exact = true;
    } else {
        const auto& a = seq.values();
        const long double Nl = static_cast<long double>(N);
        const long double s2 = Nl * Nl / seq.theta();
        long double fmin = std::numeric_limits<long double>::infinity(), fmax = -fmin;
        long double smin = fmin, smax = -fmin;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const long double d = (a[i + 1] - a[i]) * Nl;
            fmin = std::min(fmin, d);
            fmax = std::max(fmax, d);
        }
        for (std::size_t i = 0; i + 2 < n; ++i) {
            const long double d2 = ((a[i + 2] - a[i + 1]) - (a[i + 1] - a[i])) * s2;
            smin = std::min(smin, d2);
            smax = std::max(smax, d2);
        }
        r.first_diff_min = static_cast<double>(fmin);
        r.first_diff_max = static_cast<double>(fmax);
        r.second_diff_min = static_cast<double>(smin);
        r.second_diff_max = static_cast<double>(smax);
        r.pass = fmin >= 0.25L && fmax <= 4 && smin >= 0.25L && smax <= 4;
    }
    r.tightest_C = tightest(r.first_diff_min, r.first_diff_max, r.second_diff_min, r.second_diff_max);
    return r;
}

long double default_intersect_tol(std::int64_t N, long double alpha) {
    return 1e-9L * std::pow(static_cast<long double>(N), -alpha);
}

IntersectResult intersect_count(const ConvexSequence& seq, long double alpha, long double tol) {
    if (alpha < 0) throw std::invalid_argument("intersect_count: alpha must be >= 0");
    if (tol < 0) throw std::invalid_argument("intersect_count: tol must be >= 0");
    IntersectResult out;
    const std::int64_t N = seq.N();
    if (tol == 0) {
        if (!seq.exact_values()) throw std::invalid_argument("intersect_count: tol = 0 requires exact values");
        const auto k = exact_integer_power(N, alpha);
        if (!k) throw std::invalid_argument("intersect_count: exact test requires N^alpha to be an integer");
        const Rational scale(*k, 1);
        const auto& a = *seq.exact_values();
        for (std::size_t i = 0; i < a.size(); ++i) {
            if ((a[i] * scale).is_integer()) out.indices.push_back(static_cast<std::int64_t>(i + 1));
        }
    } else {
        const long double s = std::pow(static_cast<long double>(N), alpha);
        const auto& a = seq.values();
        for (std::size_t i = 0; i < a.size(); ++i) {
            const long double u = a[i] * s;
            if (std::fabs(u - std::nearbyint(u)) / s <= tol) out.indices.push_back(static_cast<std::int64_t>(i + 1));
        }
    }
    out.count = out.indices.size();
    return out;
}

ConvexSequence shear(const ConvexSequence& seq, long double lambda) {
    std::vector<long double> v = seq.values();
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += lambda * static_cast<long double>(i + 1);
    SequenceMetadata meta = seq.metadata();
    meta.shear += lambda;
    return ConvexSequence(seq.N(), std::move(v), std::nullopt, {}, meta, seq.theta());
}

ConvexSequence shear(const ConvexSequence& seq, const Rational& lambda) {
    const long double lam = lambda.to_long_double();
    std::vector<long double> v = seq.values();
    std::optional<std::vector<Rational>> exact;
    if (seq.exact_values()) {
        exact = *seq.exact_values();
        for (std::size_t i = 0; i < exact->size(); ++i) {
            (*exact)[i] += lambda * Rational(static_cast<long long>(i + 1));
            v[i] = (*exact)[i].to_long_double();
        }
    } else {
        for (std::size_t i = 0; i < v.size(); ++i) v[i] += lam * static_cast<long double>(i + 1);
    }
    SequenceMetadata meta = seq.metadata();
    meta.shear += lam;
    return ConvexSequence(seq.N(), std::move(v), std::move(exact), {}, meta, seq.theta());
}

ConvexSequence restrict_rescale(const ConvexSequence& seq, long double beta) {
    if (!(beta > 0 && beta <= 1)) throw std::invalid_argument("restrict_rescale: beta must lie in (0, 1]");
    const std::int64_t N = seq.N();
    const long double Nb = std::pow(static_cast<long double>(N), beta);
    if (beta * Nb < 3) throw std::invalid_argument("restrict_rescale: beta * N^beta < 3");
    if (beta == 1) return seq;

    const std::int64_t Nt = std::min<std::int64_t>(N, static_cast<std::int64_t>(std::ceil(Nb - 1e-9L * Nb)));
    const long double factor = std::pow(static_cast<long double>(N), 1 - beta);
    std::vector<long double> v(seq.values().begin(), seq.values().begin() + Nt);
    for (auto& x : v) x *= factor;

    std::vector<HitCertificate> hits;
    if (exact_integer_power(N, beta)) {
        for (const auto& h : seq.hits()) {
            if (h.n > Nt) continue;
            hits.push_back({h.n, (h.alpha + beta - 1) / beta, h.coordinate});
        }
    }
    SequenceMetadata meta = seq.metadata();
    meta.construction += "+restrict";
    return ConvexSequence(Nt, std::move(v), std::nullopt, std::move(hits), meta, 1 / factor);
}

}  // namespace convexsum
