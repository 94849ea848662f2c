#pragma once

/**
 * @file convexseq.hpp
 * @brief Uniformly convex sequences: validation, lattice intersections and
 *        the mediant-based constructions with many lattice hits.
 *
 * A sequence a_1..a_N with parameter N is uniformly convex when
 *   a_{n+1} - a_n                     in [1/(4N),  4/N]
 *   (a_{n+2}-a_{n+1}) - (a_{n+1}-a_n) in [1/(4N^2), 4/N^2].
 * Generalized Dirichlet sequences scale the second window by theta in (0, 1].
 */

#include "convexsum/interp.hpp"
#include "convexsum/rational.hpp"
#include "convexsum/sequence.hpp"

#include <cstdint>
#include <vector>

namespace convexsum {

/// First differences in units of 1/N, second differences in units of theta/N^2.
struct ConvexityReport {
    double first_diff_min = 0;
    double first_diff_max = 0;
    double second_diff_min = 0;
    double second_diff_max = 0;
    /// Smallest C >= 1 with every difference inside [1/C, C] (in the units above).
    double tightest_C = 1;
    bool pass = false;
    bool exact = false;  // computed from exact rationals
};

/// Requires N >= 3. Uses exact values when the sequence carries them.
ConvexityReport validate(const ConvexSequence& seq);

struct IntersectResult {
    std::size_t count = 0;
    std::vector<std::int64_t> indices;  // 1-based n
};

/// Default float-mode tolerance, 1e-9 * N^{-alpha}.
long double default_intersect_tol(std::int64_t N, long double alpha);

/// Counts n with dist(a_n, N^{-alpha} Z) <= tol. tol == 0 demands exact
/// values and an integral N^alpha, and decides membership exactly.
IntersectResult intersect_count(const ConvexSequence& seq, long double alpha, long double tol);

/// a_n + lambda * n. Second differences are unchanged; hit certificates are
/// dropped because lattice membership is not preserved in general.
ConvexSequence shear(const ConvexSequence& seq, long double lambda);
/// Exact variant; keeps exact values exact.
ConvexSequence shear(const ConvexSequence& seq, const Rational& lambda);

/// {N^{1-beta} a_n}_{n <= ceil(N^beta)}: a generalized Dirichlet sequence of
/// length ceil(N^beta) with theta = N^{beta-1}. Hit certificates carry over
/// (with alpha' -> (alpha'+beta-1)/beta) when N^beta is an integer.
ConvexSequence restrict_rescale(const ConvexSequence& seq, long double beta);

/// One knot interval of the mediant construction.
struct MediantPair {
    Fraction left;      // r_i re-expressed with denominator in [Delta, 2 Delta]
    Fraction right;     // r_{i+1} likewise
    long double delta;  // N^{2-alpha} (r_{i+1} - r_i)
    BigInt M;           // left.num + right.num
    BigInt k;           // left.den + right.den
};

struct DirichletConstruction {
    std::int64_t N = 0;
    long double alpha = 0;
    std::int64_t qmax = 0;
    std::vector<Rational> fractions;
    std::vector<MediantPair> pairs;
    /// Knot j sits at n = knot_index[j] with a_n = knot_coordinate[j] * N^{-alpha};
    /// knot 0 is the origin (n = 0, not sampled).
    std::vector<BigInt> knot_index;
    std::vector<BigInt> knot_coordinate;
    std::vector<Knot> knots;
    ConvexInterpolant interpolant;  // C2, padded to x = 1
    ConvexSequence sequence{3, {0, 1, 2}};
};

/// Fractions in [N^{alpha-1}/3, 2N^{alpha-1}/3] with denominator <= N^{(2-alpha)/3},
/// mediants of consecutive pairs as knot increments, C2 interpolation, sampling
/// at n/N. Throws ConstructionInfeasible if fewer than two fractions survive.
DirichletConstruction build_dirichlet_like(std::int64_t N, long double alpha);
ConvexSequence construct_dirichlet_like(std::int64_t N, long double alpha);

/// Tuning of the lattice walk used for alpha in [0, 1/2].
struct SmallAlphaParams {
    long double start_slope = 0.5L;
    long double curvature = 1.5L;  // f'' of the guiding parabola
    long double max_slope = 3.0L;
    std::int64_t max_stride = 16;
};

struct SmallAlphaConstruction {
    std::int64_t N = 0;
    long double alpha = 0;
    std::vector<std::int64_t> knot_index;  // n of each hit, starting at 1
    std::vector<BigInt> knot_coordinate;   // lattice coordinate m_j
    std::vector<long double> secants;
    std::int64_t stride = 1;  // lattice levels between consecutive hits
    std::vector<Knot> knots;
    ConvexInterpolant interpolant;
    ConvexSequence sequence{3, {0, 1, 2}};
};

/// Places hits at lattice values y_j = j * stride * N^{-alpha} along a guiding
/// parabola, rounded to the 1/N grid, and interpolates them.
SmallAlphaConstruction build_small_alpha(std::int64_t N, long double alpha, const SmallAlphaParams& params = {});
ConvexSequence construct_small_alpha(std::int64_t N, long double alpha);

/// Dispatch by alpha: small-alpha walk for alpha <= 1/2, mediant construction above.
ConvexSequence construct_sequence(std::int64_t N, long double alpha);

/// Largest integer q with q <= x (with a small tolerance for values like 16 - 1e-15).
std::int64_t floor_tolerant(long double x);

}  // namespace convexsum
