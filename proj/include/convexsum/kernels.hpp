#pragma once

/**
 * @file kernels.hpp
 * @brief Row evaluators behind eval_grid and the sweeps. A row is f(., t_j)
 *        on the whole x-grid.
 */

#include "convexsum/expsum.hpp"

#include <complex>
#include <memory>

namespace convexsum::kernels {

class RowKernel {
public:
    virtual ~RowKernel() = default;
    /// Writes rows [j0, j1) to out, (j1 - j0) * Mx values. Safe to call concurrently.
    virtual void rows(std::int64_t j0, std::int64_t j1, std::complex<double>* out) const = 0;
    virtual Kernel kind() const = 0;
};

std::unique_ptr<RowKernel> make_kernel(Kernel kind, const ExpSumSpec& spec, const GridSpec& grid);

/// e(phase) with phase reduced mod 1 in extended precision.
std::complex<double> unit(long double phase);

}  // namespace convexsum::kernels
