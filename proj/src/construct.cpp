#include "convexsum/convexseq.hpp"
#include "convexsum/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

namespace convexsum {

std::int64_t floor_tolerant(long double x) {
    const long double r = std::nearbyint(x);
    if (std::fabs(x - r) <= 1e-9L * std::max<long double>(1, std::fabs(x))) return static_cast<std::int64_t>(r);
    return static_cast<std::int64_t>(std::floor(x));
}

namespace {

// Samples f(n/N), pins certified hits to their exact lattice values and,
// if the window is missed, tries a small integer global scale (integer
// scales keep N^{-alpha} Z lattice points on the lattice).
ConvexSequence sample_and_certify(const ConvexInterpolant& f, std::int64_t N, long double alpha,
                                  const std::vector<std::pair<std::int64_t, BigInt>>& hits,
                                  SequenceMetadata meta) {
    const long double h = std::pow(static_cast<long double>(N), -alpha);
    std::vector<long double> base(static_cast<std::size_t>(N));
    for (std::int64_t n = 1; n <= N; ++n) {
        base[static_cast<std::size_t>(n - 1)] = f.eval(static_cast<double>(n) / static_cast<double>(N)).f;
    }
    for (const auto& [n, m] : hits) base[static_cast<std::size_t>(n - 1)] = static_cast<long double>(m) * h;

    auto make = [&](std::int64_t scale) {
        std::vector<long double> v = base;
        for (auto& x : v) x *= static_cast<long double>(scale);
        std::vector<HitCertificate> certs;
        certs.reserve(hits.size());
        for (const auto& [n, m] : hits) {
            const BigInt coord = m * scale;
            v[static_cast<std::size_t>(n - 1)] = static_cast<long double>(coord) * h;
            certs.push_back({n, alpha, Rational(coord, 1)});
        }
        SequenceMetadata md = meta;
        md.scale = scale;
        return ConvexSequence(N, std::move(v), std::nullopt, std::move(certs), md);
    };

    ConvexSequence best = make(1);
    if (N < 3) return best;
    double best_c = validate(best).tightest_C;
    if (best_c <= 4) return best;
    for (std::int64_t scale = 2; scale <= 4; ++scale) {
        ConvexSequence cand = make(scale);
        const double c = validate(cand).tightest_C;
        if (c < best_c) {
            best_c = c;
            best = std::move(cand);
        }
    }
    return best;
}

}  // namespace

DirichletConstruction build_dirichlet_like(std::int64_t N, long double alpha) {
    if (N < 10) throw std::invalid_argument("construct_dirichlet_like: N must be >= 10");
    if (!(alpha >= 0.5L && alpha <= 2)) throw std::invalid_argument("construct_dirichlet_like: alpha must lie in [1/2, 2]");

    DirichletConstruction out;
    out.N = N;
    out.alpha = alpha;
    const long double Nl = static_cast<long double>(N);

    // Interval endpoints: N^{alpha-1}/3 and 2N^{alpha-1}/3, exact when N^{|alpha-1|} is integral.
    Rational lo, hi;
    if (auto up = exact_integer_power(N, std::fabs(alpha - 1))) {
        const Rational base = alpha >= 1 ? Rational(*up, 1) : Rational(BigInt(1), *up);
        lo = base * Rational(BigInt(1), BigInt(3));
        hi = base * Rational(BigInt(2), BigInt(3));
    } else {
        // Irrational endpoints: bracket them with fine dyadic rationals.
        const long double e = std::pow(Nl, alpha - 1) / 3;
        int ex = 0;
        std::frexp(2 * e, &ex);
        const int shift = 60 - std::max(0, ex);
        const BigInt scale = BigInt(1) << shift;
        lo = Rational(BigInt(static_cast<long long>(std::ceil(std::ldexp(e, shift)))), scale);
        hi = Rational(BigInt(static_cast<long long>(std::floor(std::ldexp(2 * e, shift)))), scale);
    }
    out.qmax = std::max<std::int64_t>(1, floor_tolerant(std::pow(Nl, (2 - alpha) / 3)));
    out.fractions = enumerate_fractions(lo, hi, out.qmax);
    if (out.fractions.size() < 2)
        throw ConstructionInfeasible("construct_dirichlet_like: fewer than two fractions for N=" + std::to_string(N) +
                                     ", alpha=" + std::to_string(static_cast<double>(alpha)));

    const auto exact_scale = exact_integer_power(N, 2 - alpha);
    const long double scale_l = std::pow(Nl, 2 - alpha);
    for (std::size_t i = 0; i + 1 < out.fractions.size(); ++i) {
        const Rational& r1 = out.fractions[i];
        const Rational& r2 = out.fractions[i + 1];
        MediantPair pair;
        if (exact_scale) {
            const Rational delta = Rational(*exact_scale, 1) * (r2 - r1);
            pair.delta = delta.to_long_double();
            pair.left = expand_to_range(r1, delta, delta * Rational(2));
            pair.right = expand_to_range(r2, delta, delta * Rational(2));
        } else {
            pair.delta = scale_l * (r2 - r1).to_long_double();
            pair.left = expand_to_range(r1, pair.delta, 2 * pair.delta);
            pair.right = expand_to_range(r2, pair.delta, 2 * pair.delta);
        }
        pair.M = pair.left.num + pair.right.num;
        pair.k = pair.left.den + pair.right.den;
        out.pairs.push_back(std::move(pair));
    }

    // Trim trailing pairs until the knots fit in [0, 1].
    BigInt total = 0;
    std::size_t used = 0;
    for (const auto& p : out.pairs) {
        if (total + p.k > N) break;
        total += p.k;
        ++used;
    }
    if (used < 1)
        throw ConstructionInfeasible("construct_dirichlet_like: no knot interval fits in [0, 1]");
    const std::size_t trimmed = out.pairs.size() - used;

    const long double h = std::pow(Nl, -alpha);
    const long double slope_scale = std::pow(Nl, 1 - alpha);
    BigInt n = 0, m = 0;
    out.knot_index.push_back(n);
    out.knot_coordinate.push_back(m);
    out.knots.push_back({0.0, 0.0, static_cast<double>(slope_scale * out.fractions[0].to_long_double())});
    for (std::size_t i = 0; i < used; ++i) {
        n += out.pairs[i].k;
        m += out.pairs[i].M;
        out.knot_index.push_back(n);
        out.knot_coordinate.push_back(m);
        out.knots.push_back({static_cast<double>(static_cast<long double>(n) / Nl),
                             static_cast<double>(static_cast<long double>(m) * h),
                             static_cast<double>(slope_scale * out.fractions[i + 1].to_long_double())});
    }

    ConvexInterpolant f = upgrade_c2(build_c1(out.knots));
    f = extend_right(f, 1.0);
    out.interpolant = f;

    std::vector<std::pair<std::int64_t, BigInt>> hits;
    for (std::size_t j = 1; j < out.knot_index.size(); ++j) {
        hits.emplace_back(static_cast<std::int64_t>(out.knot_index[j]), out.knot_coordinate[j]);
    }
    SequenceMetadata meta;
    meta.construction = "dirichlet_like";
    meta.alpha = alpha;
    meta.knot_count = out.knots.size();
    meta.trimmed_knots = trimmed;
    meta.padding_start = static_cast<long double>(total) / Nl;
    out.sequence = sample_and_certify(f, N, alpha, hits, meta);
    return out;
}

ConvexSequence construct_dirichlet_like(std::int64_t N, long double alpha) {
    return build_dirichlet_like(N, alpha).sequence;
}

namespace {

// Hits follow the parabola phi(x) = s0 (x - x0) + K (x - x0)^2 / 2 through
// lattice levels m = 0, stride, 2 stride, ..., rounded to the 1/N grid.
SmallAlphaConstruction small_alpha_walk(std::int64_t N, long double alpha, const SmallAlphaParams& params,
                                        std::int64_t stride) {
    SmallAlphaConstruction out;
    out.N = N;
    out.alpha = alpha;
    const long double Nl = static_cast<long double>(N);
    const long double h = std::pow(Nl, -alpha);
    const long double s0 = params.start_slope, K = params.curvature;
    const long double x0 = 1 / Nl;

    out.knot_index.push_back(1);
    out.knot_coordinate.push_back(0);
    for (std::int64_t m = stride;; m += stride) {
        const long double y = static_cast<long double>(m) * h;
        const long double dx = (std::sqrt(s0 * s0 + 2 * K * y) - s0) / K;
        if (s0 + K * dx > params.max_slope) break;
        const std::int64_t n = 1 + std::llround(dx * Nl);
        if (n > N) break;
        const std::int64_t prev = out.knot_index.back();
        if (n <= prev) break;
        const long double secant =
            static_cast<long double>(stride) * h * Nl / static_cast<long double>(n - prev);
        if (!out.secants.empty() && secant <= out.secants.back()) break;
        out.knot_index.push_back(n);
        out.knot_coordinate.push_back(m);
        out.secants.push_back(secant);
    }

    const std::size_t J = out.secants.size();
    ConvexInterpolant f;
    if (J == 0) {
        out.knots.push_back({static_cast<double>(x0), 0.0, static_cast<double>(s0)});
        f = extend_right(build_c1(out.knots), 1.0, static_cast<double>(K));
    } else {
        const auto& s = out.secants;
        for (std::size_t j = 0; j <= J; ++j) {
            long double p;
            if (j == 0) {
                p = J > 1 ? s[0] - (s[1] - s[0]) / 2 : s[0] - K / (2 * Nl) * static_cast<long double>(out.knot_index[1] - 1);
            } else if (j == J) {
                p = J > 1 ? s[J - 1] + (s[J - 1] - s[J - 2]) / 2
                          : s[0] + K / (2 * Nl) * static_cast<long double>(out.knot_index[1] - 1);
            } else {
                p = (s[j - 1] + s[j]) / 2;
            }
            out.knots.push_back({static_cast<double>(static_cast<long double>(out.knot_index[j]) / Nl),
                                 static_cast<double>(static_cast<long double>(out.knot_coordinate[j]) * h),
                                 static_cast<double>(p)});
        }
        f = extend_right(upgrade_c2(build_c1(out.knots)), 1.0);
    }
    out.interpolant = f;
    out.stride = stride;

    std::vector<std::pair<std::int64_t, BigInt>> hits;
    for (std::size_t j = 0; j < out.knot_index.size(); ++j) hits.emplace_back(out.knot_index[j], out.knot_coordinate[j]);
    SequenceMetadata meta;
    meta.construction = "small_alpha";
    meta.alpha = alpha;
    meta.knot_count = out.knots.size();
    meta.padding_start = static_cast<long double>(out.knot_index.back()) / Nl;
    out.sequence = sample_and_certify(f, N, alpha, hits, meta);
    return out;
}

}  // namespace

SmallAlphaConstruction build_small_alpha(std::int64_t N, long double alpha, const SmallAlphaParams& params) {
    if (N < 10) throw std::invalid_argument("construct_small_alpha: N must be >= 10");
    if (!(alpha >= 0 && alpha <= 0.5L)) throw std::invalid_argument("construct_small_alpha: alpha must lie in [0, 1/2]");

    // Rounding to the 1/N grid perturbs the secants by about sigma/gap; a
    // larger lattice stride spaces them further apart. Take the smallest
    // stride whose sequence passes, else the tightest one seen.
    std::optional<SmallAlphaConstruction> best;
    double best_c = std::numeric_limits<double>::infinity();
    for (std::int64_t stride = 1; stride <= params.max_stride; ++stride) {
        SmallAlphaConstruction cand;
        try {
            cand = small_alpha_walk(N, alpha, params, stride);
        } catch (const NonInterpolable&) {
            continue;
        }
        const double c = validate(cand.sequence).tightest_C;
        if (c <= 4) return cand;
        if (c < best_c) {
            best_c = c;
            best = std::move(cand);
        }
    }
    if (!best) throw ConstructionInfeasible("construct_small_alpha: no stride produced an interpolable knot set");
    return *best;
}

ConvexSequence construct_small_alpha(std::int64_t N, long double alpha) {
    return build_small_alpha(N, alpha).sequence;
}

ConvexSequence construct_sequence(std::int64_t N, long double alpha) {
    if (alpha <= 0.5L) return construct_small_alpha(N, alpha);
    return construct_dirichlet_like(N, alpha);
}

}  // namespace convexsum
