#pragma once

/**
 * @file experiments.hpp
 * @brief Witness experiments A, B, C, the hit-count scan and log-log fits.
 *
 * A: alpha = 1 construction sheared by -1/N^2, b = 1 on hits,
 *    sup over t in [0, N^2), L^4 over x in [0, N). f(j, jN) = #hits.
 * B: alpha = 1/2 construction, sup over x in [0, N), L^4 over t in [0, N^2).
 *    f(0, j sqrt(N)) = #hits.
 * C: alpha = 1 construction with xi_n = n/N - a_n/N, eta_n = a_n,
 *    sup over x in [0, N^2), L^4 over t in [0, N^2). f(jN, j) = #hits.
 * ratio = norm / (N^exponent ||b||_2).
 */

#include "convexsum/expsum.hpp"
#include "convexsum/sequence.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace convexsum {

struct ExperimentConfig {
    std::int64_t N = 64;
    std::int64_t grid_budget = std::int64_t{1} << 24;  // cap on t-grid points
    std::uint64_t seed = 0;
    int identity_samples = 64;
    EvalOptions eval;
};

/// Spec, grid and norm parameters of one experiment instance.
struct ExperimentSetup {
    char id = 'A';
    std::int64_t N = 0;
    double alpha = 1;
    ConvexSequence sequence{3, {0, 1, 2}};
    std::vector<std::int64_t> hit_indices;
    ExpSumSpec spec;
    GridSpec grid;
    Direction sup_direction = Direction::T;
    double exponent = 0;
    bool stratified = false;  // t-grid capped by the budget
};

ExperimentSetup setup_experiment(char id, std::int64_t N, std::int64_t grid_budget);

struct IdentityCheck {
    std::vector<std::int64_t> checked_j;
    bool pass = false;
    double max_rel_error = 0;
};

/// Evaluates the experiment's identity point for each j against #hits.
IdentityCheck check_identity(const ExperimentSetup& setup, const std::vector<std::int64_t>& js, double rel_tol = 1e-6);
/// The j values an experiment checks: all of [1, N] for A, otherwise
/// `samples` distinct seeded draws from its j range, sorted.
std::vector<std::int64_t> identity_points(const ExperimentSetup& setup, std::uint64_t seed, int samples);
/// Point (x, t) where f equals #hits for a given j.
std::pair<long double, long double> identity_node(const ExperimentSetup& setup, std::int64_t j);

struct ExperimentReport {
    std::string id;
    std::int64_t N = 0;
    double alpha = 0;
    std::size_t hit_count = 0;
    IdentityCheck identity;
    SupNormResult norm;
    double predicted_exponent = 0;
    double b_norm = 0;
    double ratio = 0;
    std::uint64_t seed = 0;
    SequenceMetadata construction;
    double runtime_seconds = 0;  // not serialized
};

ExperimentReport run_experiment(char id, const ExperimentConfig& cfg);
ExperimentReport experiment_A(const ExperimentConfig& cfg);
ExperimentReport experiment_B(const ExperimentConfig& cfg);
ExperimentReport experiment_C(const ExperimentConfig& cfg);

struct RegressionResult {
    std::vector<std::pair<double, double>> points;  // (log N, log value)
    double slope = 0;
    double intercept = 0;
    double residual = 0;  // RMS of the fit residuals
};

/// OLS on (log N, log value). Needs >= 3 points with N, value > 0.
RegressionResult regress(const std::vector<std::pair<double, double>>& points);

struct ScanResult {
    double alpha = 0;
    std::string construction;
    std::vector<std::int64_t> N;
    std::vector<std::size_t> certified;   // certified lattice hits
    std::vector<std::size_t> float_count; // intersect_count at the default tolerance
    RegressionResult fit;                 // on the certified counts
    double target = 0;                    // (alpha+1)/3 or alpha
};

std::vector<ScanResult> intersection_scan(const std::vector<std::int64_t>& Ns, const std::vector<double>& alphas);

nlohmann::json to_json(const IdentityCheck& c);
nlohmann::json to_json(const ExperimentReport& r);
nlohmann::json to_json(const RegressionResult& r);
nlohmann::json to_json(const ScanResult& r);

}  // namespace convexsum
