#pragma once

#include <stdexcept>
#include <string>

namespace convexsum {

/// A construction recipe could not be carried out for the given parameters
/// (too few fractions, no admissible denominator, ...).
class ConstructionInfeasible : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Knot data violating the interpolation hypotheses.
class NonInterpolable : public std::invalid_argument {
public:
    NonInterpolable(std::size_t pair, const std::string& why)
        : std::invalid_argument("knot pair " + std::to_string(pair) + ": " + why), pair_(pair) {}
    std::size_t pair() const { return pair_; }

private:
    std::size_t pair_;
};

}  // namespace convexsum
