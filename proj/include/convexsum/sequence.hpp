#pragma once

#include "convexsum/rational.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace convexsum {

/// Certificate that a_n lies on the lattice N^{-alpha} Z.
/// The value is stored by its lattice coordinate: a_n = (num/den) * N^{-alpha},
/// so membership is exactly `coordinate.is_integer()`.
struct HitCertificate {
    std::int64_t n = 0;
    long double alpha = 0;
    Rational coordinate;

    bool is_lattice_member() const { return coordinate.is_integer(); }
};

/// Provenance of a constructed sequence.
struct SequenceMetadata {
    std::string construction;  // "dirichlet_like", "small_alpha", "csv", ...
    long double alpha = 0;
    std::int64_t scale = 1;    // integer global scale applied after sampling
    long double shear = 0;     // accumulated lambda of a_n + lambda*n
    std::size_t knot_count = 0;
    std::size_t trimmed_knots = 0;
    long double padding_start = 1;  // x beyond which f'' == D
};

/// Finite sequence a_1..a_N with parameter N. Immutable once built.
///
/// `theta` is the second-difference scale of a generalized Dirichlet sequence
/// (1 for an ordinary uniformly convex sequence).
class ConvexSequence {
public:
    ConvexSequence(std::int64_t N, std::vector<long double> values,
                   std::optional<std::vector<Rational>> exact = std::nullopt,
                   std::vector<HitCertificate> hits = {}, SequenceMetadata meta = {},
                   long double theta = 1);

    std::int64_t N() const { return N_; }
    std::size_t size() const { return values_.size(); }
    long double theta() const { return theta_; }

    /// 1-based access, matching a_1..a_N.
    long double at(std::int64_t n) const { return values_.at(static_cast<std::size_t>(n - 1)); }
    const std::vector<long double>& values() const { return values_; }
    const std::optional<std::vector<Rational>>& exact_values() const { return exact_; }
    const std::vector<HitCertificate>& hits() const { return hits_; }
    const SequenceMetadata& metadata() const { return meta_; }

private:
    std::int64_t N_;
    std::vector<long double> values_;
    std::optional<std::vector<Rational>> exact_;
    std::vector<HitCertificate> hits_;
    SequenceMetadata meta_;
    long double theta_;
};

}  // namespace convexsum
