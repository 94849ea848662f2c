#include "convexsum/kernels.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace convexsum::kernels {

std::complex<double> unit(long double phase) {
    long double r = phase - std::floor(phase);
    const double a = 2 * std::numbers::pi * static_cast<double>(r);
    return {std::cos(a), std::sin(a)};
}

namespace {

class ReferenceKernel final : public RowKernel {
public:
    ReferenceKernel(const ExpSumSpec& spec, const GridSpec& grid) : spec_(spec), grid_(grid) {}
    void rows(std::int64_t j0, std::int64_t j1, std::complex<double>* out) const override {
        for (std::int64_t j = j0; j < j1; ++j) {
            const long double t = grid_.t(j);
            for (std::int64_t k = 0; k < grid_.Mx; ++k) *out++ = eval_point(spec_, grid_.x(k), t);
        }
    }
    Kernel kind() const override { return Kernel::Reference; }

private:
    const ExpSumSpec& spec_;
    GridSpec grid_;
};

// f(x_k, t) = sum_n [b_n e(t eta_n)] e(x_k xi_n) with the x factors tabulated once.
class SeparableKernel final : public RowKernel {
public:
    SeparableKernel(const ExpSumSpec& spec, const GridSpec& grid) : grid_(grid) {
        for (std::size_t i = 0; i < spec.b.size(); ++i) {
            if (spec.b[i] == 0.0) continue;
            b_.push_back(spec.b[i]);
            eta_.push_back(spec.eta[i]);
            xi_.push_back(spec.xi[i]);
        }
        const auto Mx = static_cast<std::size_t>(grid.Mx);
        table_.resize(b_.size() * Mx);
        for (std::size_t i = 0; i < b_.size(); ++i) {
            for (std::size_t k = 0; k < Mx; ++k) table_[i * Mx + k] = unit(grid.x(static_cast<std::int64_t>(k)) * xi_[i]);
        }
    }

    void rows(std::int64_t j0, std::int64_t j1, std::complex<double>* out) const override {
        const auto Mx = static_cast<std::size_t>(grid_.Mx);
        std::vector<std::complex<double>> w(b_.size());
        for (std::int64_t j = j0; j < j1; ++j, out += Mx) {
            const long double t = grid_.t(j);
            for (std::size_t i = 0; i < b_.size(); ++i) w[i] = b_[i] * unit(t * eta_[i]);
            std::fill(out, out + Mx, std::complex<double>{});
            for (std::size_t i = 0; i < b_.size(); ++i) {
                const std::complex<double>* e = &table_[i * Mx];
                const std::complex<double> wi = w[i];
                for (std::size_t k = 0; k < Mx; ++k) out[k] += wi * e[k];
            }
        }
    }
    Kernel kind() const override { return Kernel::Separable; }

private:
    GridSpec grid_;
    std::vector<std::complex<double>> b_;
    std::vector<long double> eta_, xi_;
    std::vector<std::complex<double>> table_;
};

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

// Canonical grid: x_k = k N / Mx, so e(x_k n / N) = e(k n / Mx) and each row
// is a backward DFT of the coefficients folded modulo Mx.
class FFTKernel final : public RowKernel {
public:
    FFTKernel(const ExpSumSpec& spec, const GridSpec& grid) : grid_(grid) {
        for (std::size_t i = 0; i < spec.b.size(); ++i) {
            if (spec.b[i] == 0.0) continue;
            b_.push_back(spec.b[i]);
            eta_.push_back(spec.eta[i]);
            bin_.push_back(static_cast<std::int64_t>(i + 1) % grid.Mx);
        }
        std::vector<std::complex<double>> scratch(static_cast<std::size_t>(grid.Mx));
        auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
        std::lock_guard lock(planner_mutex());
        plan_ = fftw_plan_dft_1d(static_cast<int>(grid.Mx), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (!plan_) throw std::runtime_error("FFTW planning failed");
    }
    ~FFTKernel() override {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan_);
    }
    FFTKernel(const FFTKernel&) = delete;
    FFTKernel& operator=(const FFTKernel&) = delete;

    void rows(std::int64_t j0, std::int64_t j1, std::complex<double>* out) const override {
        const auto Mx = static_cast<std::size_t>(grid_.Mx);
        for (std::int64_t j = j0; j < j1; ++j, out += Mx) {
            const long double t = grid_.t(j);
            std::fill(out, out + Mx, std::complex<double>{});
            for (std::size_t i = 0; i < b_.size(); ++i) out[bin_[i]] += b_[i] * unit(t * eta_[i]);
            auto* buf = reinterpret_cast<fftw_complex*>(out);
            fftw_execute_dft(plan_, buf, buf);
        }
    }
    Kernel kind() const override { return Kernel::FFT; }

private:
    GridSpec grid_;
    std::vector<std::complex<double>> b_;
    std::vector<long double> eta_;
    std::vector<std::int64_t> bin_;
    fftw_plan plan_ = nullptr;
};

}  // namespace

std::unique_ptr<RowKernel> make_kernel(Kernel kind, const ExpSumSpec& spec, const GridSpec& grid) {
    switch (kind) {
        case Kernel::Reference: return std::make_unique<ReferenceKernel>(spec, grid);
        case Kernel::Separable: return std::make_unique<SeparableKernel>(spec, grid);
        case Kernel::FFT:
            if (!fast_path_compatible(spec, grid)) throw std::invalid_argument("fast path: grid is not canonical for this spec");
            return std::make_unique<FFTKernel>(spec, grid);
    }
    throw std::logic_error("unknown kernel");
}

}  // namespace convexsum::kernels
