#pragma once

/**
 * @file interp.hpp
 * @brief Strictly convex C1 / C2 interpolation with prescribed slopes.
 *
 * Given knots (x_i, y_i, p_i) with increasing x, y, p and secant slopes
 * strictly between neighbouring prescribed slopes, build_c1 produces a
 * function whose derivative is piecewise linear through one internal node
 * per knot pair. upgrade_c2 swaps every linear piece of f' for a sinusoid
 * with the same endpoints and area so that f'' is continuous and equal to
 * the curvature floor D at every node.
 *
 * f is stored as pieces of f' plus the value of f at the left end of each
 * piece; evaluation uses closed-form antiderivatives.
 */

#include "convexsum/sequence.hpp"

#include <nlohmann/json.hpp>

#include <span>
#include <vector>

namespace convexsum {

struct Knot {
    double x = 0;
    double y = 0;
    double p = 0;  // prescribed f'(x)
};

enum class PieceKind { Linear, Sinusoid };
enum class InterpMode { C1, C2 };

/// One piece of f' on [x_lo, x_hi], increasing from p_lo to p_hi.
struct DerivativePiece {
    PieceKind kind = PieceKind::Linear;
    double x_lo = 0, x_hi = 0;
    double p_lo = 0, p_hi = 0;
    double alpha = 0;  // sinusoid phase extent, in [pi/4, pi/2]
    double y_lo = 0;   // f(x_lo)
    bool padding = false;

    double width() const { return x_hi - x_lo; }
    /// Average slope of f' over the piece, (p_hi - p_lo) / width.
    double slope() const { return (p_hi - p_lo) / (x_hi - x_lo); }
    double mean() const { return 0.5 * (p_lo + p_hi); }
    double amplitude() const;  // (p_hi - p_lo) / (2 sin alpha)
    double center() const { return 0.5 * (x_lo + x_hi); }
    double half_width() const { return 0.5 * (x_hi - x_lo); }

    double fprime(double x) const;
    double fsecond(double x) const;
    /// Integral of f' from x_lo to x.
    double area_to(double x) const;
    double area() const { return area_to(x_hi); }
};

struct InternalNode {
    double x0 = 0;
    double p0 = 0;
};

struct InterpEval {
    double f = 0;
    double fp = 0;
    double fpp = 0;
};

class ConvexInterpolant {
public:
    ConvexInterpolant() = default;
    ConvexInterpolant(std::vector<Knot> knots, std::vector<InternalNode> nodes,
                      std::vector<DerivativePiece> pieces, double D, InterpMode mode);

    const std::vector<Knot>& knots() const { return knots_; }
    const std::vector<InternalNode>& nodes() const { return nodes_; }
    const std::vector<DerivativePiece>& pieces() const { return pieces_; }
    double D() const { return D_; }
    InterpMode mode() const { return mode_; }
    double x_begin() const { return pieces_.empty() ? knots_.front().x : pieces_.front().x_lo; }
    double x_end() const { return pieces_.empty() ? knots_.front().x : pieces_.back().x_hi; }
    bool padded() const { return !pieces_.empty() && pieces_.back().padding; }

    /// Throws std::out_of_range outside [x_begin, x_end].
    InterpEval eval(double x) const;
    std::size_t piece_index(double x) const;

private:
    std::vector<Knot> knots_;
    std::vector<InternalNode> nodes_;
    std::vector<DerivativePiece> pieces_;
    double D_ = 0;
    InterpMode mode_ = InterpMode::C1;
};

/// Piecewise-linear f' through one internal node per pair. Throws
/// NonInterpolable naming the first pair that violates the hypotheses.
ConvexInterpolant build_c1(std::span<const Knot> knots);

/// Sinusoid replacement of every (non-padding) linear piece.
ConvexInterpolant upgrade_c2(const ConvexInterpolant& c1);

/// Appends a piece with f'' == D on [x_end(), x_new_end]. `curvature`
/// overrides D (needed when there are no pieces to derive it from).
ConvexInterpolant extend_right(const ConvexInterpolant& interp, double x_new_end, double curvature = 0);

/// x in [pi/4, pi/2] with x cot x == y, for y in [0, pi/4]; bisection.
double solve_x_cot_x(double y);

/// Knots (i/N, a_i, (N/2)(a_{i+1} - a_{i-1})), i = 1..N, after extending the
/// sequence by a_0 = 2a_1 - a_2 + 1/N^2 and a_{N+1} = 2a_N - a_{N-1} + 1/N^2.
/// Throws std::invalid_argument if the sequence is not uniformly convex.
std::vector<Knot> knots_from_sequence(const ConvexSequence& seq);

/// Numeric checks of the interpolant's structural invariants.
struct InterpInvariants {
    double max_area_error = 0;        // |sum of piece areas - (y_{i+1} - y_i)| per pair
    double max_knot_value_error = 0;  // |f(x_i) - y_i|
    double max_knot_slope_error = 0;  // |f'(x_i) - p_i|
    double max_fp_jump = 0;           // one-sided f' mismatch at piece boundaries
    double max_fpp_jump = 0;          // one-sided f'' mismatch (C2 only)
    double max_knot_fpp_rel_error = 0;  // |f''(x_i) - D| / D (C2 only)
    double min_fpp = 0;               // minimum sampled f''
    std::size_t samples = 0;
    bool pass = false;
};

InterpInvariants check_invariants(const ConvexInterpolant& interp, std::size_t samples = 10000);

nlohmann::json to_json(const ConvexInterpolant& interp);
ConvexInterpolant interpolant_from_json(const nlohmann::json& j);

}  // namespace convexsum
