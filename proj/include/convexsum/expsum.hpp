#pragma once

/**
 * @file expsum.hpp
 * @brief f(x, t) = sum_n b_n e(x xi_n + t eta_n) on grids, maximal functions
 *        and level-set projections.
 *
 * e(x) = exp(2 pi i x). Grid rows are t values, columns x values. Sweeps are
 * streamed row block by row block so no full Mt x Mx matrix is formed
 * unless eval_grid is called.
 */

#include <nlohmann/json.hpp>

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace convexsum {

struct ExpSumSpec {
    std::int64_t N = 0;
    std::vector<long double> xi;   // x-frequencies
    std::vector<long double> eta;  // t-frequencies
    std::vector<std::complex<double>> b;

    /// xi_n = n / N for n = 1..N.
    static ExpSumSpec canonical(std::int64_t N, std::vector<long double> eta, std::vector<std::complex<double>> b);

    /// Throws std::invalid_argument naming the offending field.
    void check() const;
    bool canonical_xi() const;
    double l1_norm() const;
    double l2_norm() const;
    std::size_t nnz() const;
};

/// Uniform half-open grids: x_k = x_lo + (x_hi - x_lo) k / Mx, k < Mx.
struct GridSpec {
    long double x_lo = 0, x_hi = 1;
    std::int64_t Mx = 1;
    long double t_lo = 0, t_hi = 1;
    std::int64_t Mt = 1;

    long double x(std::int64_t k) const { return x_lo + (x_hi - x_lo) * static_cast<long double>(k) / static_cast<long double>(Mx); }
    long double t(std::int64_t j) const { return t_lo + (t_hi - t_lo) * static_cast<long double>(j) / static_cast<long double>(Mt); }
    long double dx() const { return (x_hi - x_lo) / static_cast<long double>(Mx); }
    long double dt() const { return (t_hi - t_lo) / static_cast<long double>(Mt); }
    void check() const;
};

/// The variable the maximum (or the projection) runs over.
enum class Direction { T, X };
enum class FastPath { Auto, On, Off };
enum class Kernel { Reference, Separable, FFT };

struct EvalOptions {
    FastPath fast_path = FastPath::Auto;
    /// Serial node-by-node evaluation through eval_point; for testing.
    bool reference = false;
    /// Refine each outer cell's sup near its coarse argmax (inner direction t only).
    bool stratified = false;
    int refine = 16;
};

std::complex<double> eval_point(const ExpSumSpec& spec, long double x, long double t);

/// ξ_n = n/N and x-grid k N / Mx on [0, N).
bool fast_path_compatible(const ExpSumSpec& spec, const GridSpec& grid);
/// Kernel chosen for (spec, grid, opts); throws if FastPath::On is incompatible.
Kernel select_kernel(const ExpSumSpec& spec, const GridSpec& grid, const EvalOptions& opts);
std::string to_string(Kernel k);
std::string to_string(Direction d);
Direction direction_from_string(const std::string& s);
FastPath fast_path_from_string(const std::string& s);

struct ComplexMatrix {
    std::int64_t rows = 0, cols = 0;
    std::vector<std::complex<double>> data;  // row-major, row = t index
    std::complex<double> operator()(std::int64_t j, std::int64_t k) const {
        return data[static_cast<std::size_t>(j * cols + k)];
    }
};

ComplexMatrix eval_grid(const ExpSumSpec& spec, const GridSpec& grid, const EvalOptions& opts = {});

struct SupNormResult {
    double value = 0;
    double p = 0;
    Direction direction = Direction::T;
    std::vector<double> outer_sup;      // sup over the inner variable, per outer node
    std::vector<long double> argmax;    // inner coordinate of each sup
    GridSpec grid;
    Kernel kernel = Kernel::Separable;
    bool stratified = false;
};

/// (sum_outer sup_inner |f|^p * d_outer)^{1/p}. Direction::T maximizes over t
/// and integrates over x.
SupNormResult sup_norm_Lp(const ExpSumSpec& spec, const GridSpec& grid, Direction sup_direction, double p,
                          const EvalOptions& opts = {});

/// Length of outer cells holding at least one inner node with |f| in [alpha/2, alpha).
double level_set_projection(const ExpSumSpec& spec, const GridSpec& grid, double alpha, Direction direction,
                            const EvalOptions& opts = {});

struct LevelEntry {
    double alpha = 0;
    double measure = 0;
    double statistic = 0;  // alpha^4 measure / (N^{7/3 or 8/3} ||b||_2^4)
};

struct LevelSetReport {
    Direction direction = Direction::T;
    std::int64_t N = 0;
    double l1 = 0, l2 = 0;
    double observed_max = 0;
    std::vector<LevelEntry> levels;  // descending alpha
    double max_statistic = 0;
    double argmax_alpha = 0;
    GridSpec grid;
};

/// Dyadic ladder alpha = 2^k from just above the observed max down 40 levels.
LevelSetReport dyadic_level_report(const ExpSumSpec& spec, const GridSpec& grid, Direction direction,
                                   const EvalOptions& opts = {});

nlohmann::json to_json(const ExpSumSpec& spec);
ExpSumSpec spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const GridSpec& grid);
GridSpec grid_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SupNormResult& r, bool with_profile = false);
nlohmann::json to_json(const LevelSetReport& r);

}  // namespace convexsum
