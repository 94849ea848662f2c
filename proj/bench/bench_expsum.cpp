// Serial reference vs parallel separable and FFT sweeps on the experiment-A grid.

#include "convexsum/experiments.hpp"
#include "convexsum/expsum.hpp"

#include <benchmark/benchmark.h>

using namespace convexsum;

namespace {

void sweep(benchmark::State& state, Kernel kernel) {
    const std::int64_t N = state.range(0);
    ExperimentSetup s = setup_experiment('A', N, std::int64_t{1} << 24);
    s.grid.Mt = std::min<std::int64_t>(s.grid.Mt, 4096);
    EvalOptions opts;
    opts.reference = kernel == Kernel::Reference;
    opts.fast_path = kernel == Kernel::FFT ? FastPath::On : FastPath::Off;
    for (auto _ : state) {
        benchmark::DoNotOptimize(sup_norm_Lp(s.spec, s.grid, Direction::T, 4, opts).value);
    }
    state.counters["nodes/s"] =
        benchmark::Counter(static_cast<double>(s.grid.Mx * s.grid.Mt), benchmark::Counter::kIsIterationInvariantRate);
}

}  // namespace

BENCHMARK_CAPTURE(sweep, reference_serial, Kernel::Reference)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(sweep, separable_omp, Kernel::Separable)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(sweep, fft_omp, Kernel::FFT)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
