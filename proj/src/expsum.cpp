#include "convexsum/expsum.hpp"
#include "convexsum/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace convexsum {

ExpSumSpec ExpSumSpec::canonical(std::int64_t N, std::vector<long double> eta, std::vector<std::complex<double>> b) {
    ExpSumSpec s;
    s.N = N;
    s.xi.resize(static_cast<std::size_t>(std::max<std::int64_t>(N, 0)));
    for (std::int64_t n = 1; n <= N; ++n) s.xi[static_cast<std::size_t>(n - 1)] = static_cast<long double>(n) / static_cast<long double>(N);
    s.eta = std::move(eta);
    s.b = std::move(b);
    s.check();
    return s;
}

void ExpSumSpec::check() const {
    if (N < 1) throw std::invalid_argument("spec field 'N' must be positive");
    const auto n = static_cast<std::size_t>(N);
    if (xi.size() != n) throw std::invalid_argument("spec field 'xi' must have length N");
    if (eta.size() != n) throw std::invalid_argument("spec field 'eta' must have length N");
    if (b.size() != n) throw std::invalid_argument("spec field 'b' must have length N");
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(xi[i])) throw std::invalid_argument("spec field 'xi' has a non-finite entry");
        if (!std::isfinite(eta[i])) throw std::invalid_argument("spec field 'eta' has a non-finite entry");
        if (!std::isfinite(b[i].real()) || !std::isfinite(b[i].imag()))
            throw std::invalid_argument("spec field 'b' has a non-finite entry");
    }
}

bool ExpSumSpec::canonical_xi() const {
    if (xi.size() != static_cast<std::size_t>(N)) return false;
    for (std::int64_t n = 1; n <= N; ++n) {
        if (xi[static_cast<std::size_t>(n - 1)] != static_cast<long double>(n) / static_cast<long double>(N)) return false;
    }
    return true;
}

double ExpSumSpec::l1_norm() const {
    long double s = 0;
    for (const auto& c : b) s += std::abs(c);
    return static_cast<double>(s);
}

double ExpSumSpec::l2_norm() const {
    long double s = 0;
    for (const auto& c : b) s += std::norm(c);
    return static_cast<double>(std::sqrt(s));
}

std::size_t ExpSumSpec::nnz() const {
    return static_cast<std::size_t>(std::count_if(b.begin(), b.end(), [](const auto& c) { return c != 0.0; }));
}

void GridSpec::check() const {
    if (Mx < 1) throw std::invalid_argument("grid field 'Mx' must be >= 1");
    if (Mt < 1) throw std::invalid_argument("grid field 'Mt' must be >= 1");
    if (!(x_hi > x_lo)) throw std::invalid_argument("grid field 'x_hi' must exceed 'x_lo'");
    if (!(t_hi > t_lo)) throw std::invalid_argument("grid field 't_hi' must exceed 't_lo'");
}

std::complex<double> eval_point(const ExpSumSpec& spec, long double x, long double t) {
    // Kahan-compensated, ascending n.
    double re = 0, im = 0, cre = 0, cim = 0;
    for (std::size_t i = 0; i < spec.b.size(); ++i) {
        if (spec.b[i] == 0.0) continue;
        const std::complex<double> term = spec.b[i] * kernels::unit(x * spec.xi[i] + t * spec.eta[i]);
        double y = term.real() - cre;
        double s = re + y;
        cre = (s - re) - y;
        re = s;
        y = term.imag() - cim;
        s = im + y;
        cim = (s - im) - y;
        im = s;
    }
    return {re, im};
}

bool fast_path_compatible(const ExpSumSpec& spec, const GridSpec& grid) {
    return spec.canonical_xi() && grid.x_lo == 0 && grid.x_hi == static_cast<long double>(spec.N);
}

Kernel select_kernel(const ExpSumSpec& spec, const GridSpec& grid, const EvalOptions& opts) {
    if (opts.reference) return Kernel::Reference;
    switch (opts.fast_path) {
        case FastPath::On:
            if (!fast_path_compatible(spec, grid))
                throw std::invalid_argument("--fast-path on: requires xi_n = n/N and an x-grid on [0, N)");
            return Kernel::FFT;
        case FastPath::Off: return Kernel::Separable;
        case FastPath::Auto: {
            if (!fast_path_compatible(spec, grid)) return Kernel::Separable;
            // Separable costs nnz per node, the transform about 5 log2(Mx).
            const double fft_cost = 5.0 * std::log2(static_cast<double>(std::max<std::int64_t>(grid.Mx, 2)));
            return static_cast<double>(spec.nnz()) > fft_cost ? Kernel::FFT : Kernel::Separable;
        }
    }
    return Kernel::Separable;
}

std::string to_string(Kernel k) {
    switch (k) {
        case Kernel::Reference: return "reference";
        case Kernel::Separable: return "separable";
        case Kernel::FFT: return "fft";
    }
    return "?";
}

std::string to_string(Direction d) { return d == Direction::T ? "t" : "x"; }

Direction direction_from_string(const std::string& s) {
    if (s == "t") return Direction::T;
    if (s == "x") return Direction::X;
    throw std::invalid_argument("direction must be 't' or 'x', got '" + s + "'");
}

FastPath fast_path_from_string(const std::string& s) {
    if (s == "auto") return FastPath::Auto;
    if (s == "on") return FastPath::On;
    if (s == "off") return FastPath::Off;
    throw std::invalid_argument("fast-path must be auto, on or off, got '" + s + "'");
}

namespace {

// Calls on_block(thread, j0, j1, rows) for every block of t-rows. Blocks are
// split statically; reducers must merge per-thread state in a fixed order.
template <class F>
void sweep(const kernels::RowKernel& kernel, const GridSpec& grid, bool parallel, int nthreads, F&& on_block) {
    const std::int64_t Mx = grid.Mx;
    const std::int64_t B = std::clamp<std::int64_t>((1 << 18) / Mx, 1, 64);
    const std::int64_t nblocks = (grid.Mt + B - 1) / B;
#pragma omp parallel num_threads(nthreads) if (parallel)
    {
        std::vector<std::complex<double>> buf(static_cast<std::size_t>(B * Mx));
        const int tid = omp_get_thread_num();
#pragma omp for schedule(static)
        for (std::int64_t blk = 0; blk < nblocks; ++blk) {
            const std::int64_t j0 = blk * B, j1 = std::min(grid.Mt, j0 + B);
            kernel.rows(j0, j1, buf.data());
            on_block(tid, j0, j1, buf.data());
        }
    }
}

struct SweepSetup {
    std::unique_ptr<kernels::RowKernel> kernel;
    bool parallel;
    int nthreads;
};

SweepSetup setup(const ExpSumSpec& spec, const GridSpec& grid, const EvalOptions& opts) {
    spec.check();
    grid.check();
    const Kernel k = select_kernel(spec, grid, opts);
    SweepSetup s{kernels::make_kernel(k, spec, grid), !opts.reference, opts.reference ? 1 : omp_get_max_threads()};
    return s;
}

struct ArgMax {
    double value = -1;
    std::int64_t index = -1;
    void offer(double v, std::int64_t i) {
        if (v > value || (v == value && i < index)) {
            value = v;
            index = i;
        }
    }
};

// Sup over the inner variable for every outer node.
std::vector<ArgMax> outer_sup(const ExpSumSpec& spec, const GridSpec& grid, Direction dir, const SweepSetup& s) {
    const std::int64_t Mx = grid.Mx;
    if (dir == Direction::X) {
        std::vector<ArgMax> rows(static_cast<std::size_t>(grid.Mt));
        sweep(*s.kernel, grid, s.parallel, s.nthreads, [&](int, std::int64_t j0, std::int64_t j1, const std::complex<double>* buf) {
            for (std::int64_t j = j0; j < j1; ++j) {
                ArgMax m;
                const auto* row = buf + (j - j0) * Mx;
                for (std::int64_t k = 0; k < Mx; ++k) m.offer(std::abs(row[k]), k);
                rows[static_cast<std::size_t>(j)] = m;
            }
        });
        return rows;
    }
    std::vector<std::vector<ArgMax>> local(static_cast<std::size_t>(s.nthreads), std::vector<ArgMax>(static_cast<std::size_t>(Mx)));
    sweep(*s.kernel, grid, s.parallel, s.nthreads, [&](int tid, std::int64_t j0, std::int64_t j1, const std::complex<double>* buf) {
        auto& cols = local[static_cast<std::size_t>(tid)];
        for (std::int64_t j = j0; j < j1; ++j) {
            const auto* row = buf + (j - j0) * Mx;
            for (std::int64_t k = 0; k < Mx; ++k) cols[static_cast<std::size_t>(k)].offer(std::abs(row[k]), j);
        }
    });
    std::vector<ArgMax> cols(static_cast<std::size_t>(Mx));
    for (const auto& l : local) {
        for (std::size_t k = 0; k < cols.size(); ++k) {
            if (l[k].index >= 0) cols[k].offer(l[k].value, l[k].index);
        }
    }
    (void)spec;
    return cols;
}

}  // namespace

ComplexMatrix eval_grid(const ExpSumSpec& spec, const GridSpec& grid, const EvalOptions& opts) {
    const SweepSetup s = setup(spec, grid, opts);
    if (static_cast<double>(grid.Mt) * static_cast<double>(grid.Mx) > static_cast<double>(1LL << 28))
        throw std::invalid_argument("eval_grid: grid exceeds 2^28 nodes; use the streaming reductions");
    ComplexMatrix m;
    m.rows = grid.Mt;
    m.cols = grid.Mx;
    m.data.resize(static_cast<std::size_t>(grid.Mt * grid.Mx));
    sweep(*s.kernel, grid, s.parallel, s.nthreads, [&](int, std::int64_t j0, std::int64_t j1, const std::complex<double>* buf) {
        std::copy(buf, buf + (j1 - j0) * grid.Mx, m.data.begin() + j0 * grid.Mx);
    });
    return m;
}

SupNormResult sup_norm_Lp(const ExpSumSpec& spec, const GridSpec& grid, Direction sup_direction, double p,
                          const EvalOptions& opts) {
    if (!(p >= 1)) throw std::invalid_argument("sup_norm_Lp: p must be >= 1");
    const SweepSetup s = setup(spec, grid, opts);
    std::vector<ArgMax> sup = outer_sup(spec, grid, sup_direction, s);

    SupNormResult r;
    r.p = p;
    r.direction = sup_direction;
    r.grid = grid;
    r.kernel = s.kernel->kind();
    r.stratified = opts.stratified && sup_direction == Direction::T && opts.refine > 1;

    std::vector<long double> arg(sup.size());
    for (std::size_t k = 0; k < sup.size(); ++k) {
        arg[k] = sup_direction == Direction::T ? grid.t(sup[k].index) : grid.x(sup[k].index);
    }

    if (r.stratified) {
        const long double dt = grid.dt();
        const int R = opts.refine;
        const auto n = static_cast<std::int64_t>(sup.size());
#pragma omp parallel for schedule(static) num_threads(s.nthreads) if (s.parallel)
        for (std::int64_t k = 0; k < n; ++k) {
            const long double x = grid.x(k);
            const long double t0 = arg[static_cast<std::size_t>(k)];
            double best = sup[static_cast<std::size_t>(k)].value;
            long double best_t = t0;
            for (int i = -R + 1; i < R; ++i) {
                if (i == 0) continue;
                const long double t = t0 + dt * static_cast<long double>(i) / static_cast<long double>(R);
                if (t < grid.t_lo || t >= grid.t_hi) continue;
                const double v = std::abs(eval_point(spec, x, t));
                if (v > best) {
                    best = v;
                    best_t = t;
                }
            }
            sup[static_cast<std::size_t>(k)].value = best;
            arg[static_cast<std::size_t>(k)] = best_t;
        }
    }

    const long double d = sup_direction == Direction::T ? grid.dx() : grid.dt();
    long double acc = 0;
    r.outer_sup.reserve(sup.size());
    for (const auto& m : sup) {
        r.outer_sup.push_back(m.value);
        acc += std::pow(static_cast<long double>(m.value), static_cast<long double>(p));
    }
    r.argmax = std::move(arg);
    r.value = static_cast<double>(std::pow(acc * d, 1.0L / static_cast<long double>(p)));
    return r;
}

double level_set_projection(const ExpSumSpec& spec, const GridSpec& grid, double alpha, Direction direction,
                            const EvalOptions& opts) {
    if (!(alpha > 0)) throw std::invalid_argument("level_set_projection: alpha must be positive");
    const SweepSetup s = setup(spec, grid, opts);
    const std::int64_t Mx = grid.Mx;
    const double lo = alpha / 2;
    auto in_band = [&](std::complex<double> z) {
        const double v = std::abs(z);
        return v >= lo && v < alpha;
    };
    std::int64_t cells = 0;
    if (direction == Direction::X) {
        std::vector<char> hit(static_cast<std::size_t>(grid.Mt), 0);
        sweep(*s.kernel, grid, s.parallel, s.nthreads, [&](int, std::int64_t j0, std::int64_t j1, const std::complex<double>* buf) {
            for (std::int64_t j = j0; j < j1; ++j) {
                const auto* row = buf + (j - j0) * Mx;
                hit[static_cast<std::size_t>(j)] = std::any_of(row, row + Mx, in_band) ? 1 : 0;
            }
        });
        cells = std::count(hit.begin(), hit.end(), 1);
        return static_cast<double>(static_cast<long double>(cells) * grid.dt());
    }
    std::vector<std::vector<char>> local(static_cast<std::size_t>(s.nthreads), std::vector<char>(static_cast<std::size_t>(Mx), 0));
    sweep(*s.kernel, grid, s.parallel, s.nthreads, [&](int tid, std::int64_t j0, std::int64_t j1, const std::complex<double>* buf) {
        auto& h = local[static_cast<std::size_t>(tid)];
        for (std::int64_t j = j0; j < j1; ++j) {
            const auto* row = buf + (j - j0) * Mx;
            for (std::int64_t k = 0; k < Mx; ++k) {
                if (in_band(row[k])) h[static_cast<std::size_t>(k)] = 1;
            }
        }
    });
    for (std::int64_t k = 0; k < Mx; ++k) {
        bool any = false;
        for (const auto& h : local) any = any || h[static_cast<std::size_t>(k)];
        cells += any ? 1 : 0;
    }
    return static_cast<double>(static_cast<long double>(cells) * grid.dx());
}

LevelSetReport dyadic_level_report(const ExpSumSpec& spec, const GridSpec& grid, Direction direction,
                                   const EvalOptions& opts) {
    const SweepSetup s = setup(spec, grid, opts);
    const double l1 = spec.l1_norm(), l2 = spec.l2_norm();
    if (!(l2 > 0)) throw std::invalid_argument("dyadic_level_report: coefficients b are all zero");

    // Bit i of a cell mask: some |f| in [2^{e-1}, 2^e) with e = top - i.
    int top = 0;
    std::frexp(l1, &top);
    top += 1;
    auto bit_of = [top](double v) -> int {
        if (!(v > 0)) return -1;
        int e = 0;
        std::frexp(v, &e);
        const int i = top - e;
        return (i >= 0 && i < 64) ? i : -1;
    };

    const std::int64_t Mx = grid.Mx;
    const std::size_t outer = static_cast<std::size_t>(direction == Direction::T ? grid.Mx : grid.Mt);
    std::vector<std::uint64_t> mask(outer, 0);
    std::vector<double> local_max(static_cast<std::size_t>(s.nthreads), 0.0);
    if (direction == Direction::X) {
        sweep(*s.kernel, grid, s.parallel, s.nthreads, [&](int tid, std::int64_t j0, std::int64_t j1, const std::complex<double>* buf) {
            for (std::int64_t j = j0; j < j1; ++j) {
                const auto* row = buf + (j - j0) * Mx;
                std::uint64_t m = 0;
                for (std::int64_t k = 0; k < Mx; ++k) {
                    const double v = std::abs(row[k]);
                    local_max[static_cast<std::size_t>(tid)] = std::max(local_max[static_cast<std::size_t>(tid)], v);
                    const int b = bit_of(v);
                    if (b >= 0) m |= std::uint64_t{1} << b;
                }
                mask[static_cast<std::size_t>(j)] = m;
            }
        });
    } else {
        std::vector<std::vector<std::uint64_t>> local(static_cast<std::size_t>(s.nthreads), std::vector<std::uint64_t>(outer, 0));
        sweep(*s.kernel, grid, s.parallel, s.nthreads, [&](int tid, std::int64_t j0, std::int64_t j1, const std::complex<double>* buf) {
            auto& l = local[static_cast<std::size_t>(tid)];
            for (std::int64_t j = j0; j < j1; ++j) {
                const auto* row = buf + (j - j0) * Mx;
                for (std::int64_t k = 0; k < Mx; ++k) {
                    const double v = std::abs(row[k]);
                    local_max[static_cast<std::size_t>(tid)] = std::max(local_max[static_cast<std::size_t>(tid)], v);
                    const int b = bit_of(v);
                    if (b >= 0) l[static_cast<std::size_t>(k)] |= std::uint64_t{1} << b;
                }
            }
        });
        for (const auto& l : local) {
            for (std::size_t k = 0; k < outer; ++k) mask[k] |= l[k];
        }
    }

    LevelSetReport r;
    r.direction = direction;
    r.N = spec.N;
    r.l1 = l1;
    r.l2 = l2;
    r.grid = grid;
    r.observed_max = *std::max_element(local_max.begin(), local_max.end());
    if (!(r.observed_max > 0)) return r;

    int emax = 0;
    std::frexp(r.observed_max, &emax);
    const long double d = direction == Direction::T ? grid.dx() : grid.dt();
    const long double norm = std::pow(static_cast<long double>(spec.N), direction == Direction::T ? 7.0L / 3 : 8.0L / 3) *
                             std::pow(static_cast<long double>(l2), 4.0L);
    for (int level = 0; level < 40; ++level) {
        const int e = emax - level;
        const int bit = top - e;
        std::int64_t cells = 0;
        if (bit >= 0 && bit < 64) {
            for (const auto m : mask) cells += (m >> bit) & 1U;
        }
        LevelEntry entry;
        entry.alpha = std::ldexp(1.0, e);
        entry.measure = static_cast<double>(static_cast<long double>(cells) * d);
        entry.statistic = static_cast<double>(std::pow(static_cast<long double>(entry.alpha), 4.0L) * entry.measure / norm);
        if (entry.statistic > r.max_statistic) {
            r.max_statistic = entry.statistic;
            r.argmax_alpha = entry.alpha;
        }
        r.levels.push_back(entry);
    }
    return r;
}

namespace {

long double number_at(const nlohmann::json& arr, std::size_t i, const char* field) {
    const auto& v = arr.at(i);
    if (!v.is_number()) throw std::invalid_argument(std::string("spec field '") + field + "' entry " + std::to_string(i) + " is not a number");
    return v.get<long double>();
}

}  // namespace

nlohmann::json to_json(const ExpSumSpec& spec) {
    nlohmann::json j;
    j["N"] = spec.N;
    nlohmann::json xi = nlohmann::json::array(), eta = nlohmann::json::array(), b = nlohmann::json::array();
    for (auto v : spec.xi) xi.push_back(static_cast<double>(v));
    for (auto v : spec.eta) eta.push_back(static_cast<double>(v));
    for (const auto& c : spec.b) b.push_back({c.real(), c.imag()});
    j["xi"] = xi;
    j["eta"] = eta;
    j["b"] = b;
    return j;
}

ExpSumSpec spec_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw std::invalid_argument("spec must be a JSON object");
    if (!j.contains("N") || !j["N"].is_number_integer()) throw std::invalid_argument("spec field 'N' missing or not an integer");
    const std::int64_t N = j["N"].get<std::int64_t>();
    if (N < 1) throw std::invalid_argument("spec field 'N' must be positive");
    const auto n = static_cast<std::size_t>(N);
    for (const char* f : {"eta", "b"}) {
        if (!j.contains(f) || !j[f].is_array()) throw std::invalid_argument(std::string("spec field '") + f + "' missing or not an array");
        if (j[f].size() != n) throw std::invalid_argument(std::string("spec field '") + f + "' must have length N");
    }
    std::vector<long double> eta(n);
    for (std::size_t i = 0; i < n; ++i) eta[i] = number_at(j["eta"], i, "eta");
    std::vector<std::complex<double>> b(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& v = j["b"][i];
        if (v.is_number()) {
            b[i] = v.get<double>();
        } else if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
            b[i] = {v[0].get<double>(), v[1].get<double>()};
        } else {
            throw std::invalid_argument("spec field 'b' entry " + std::to_string(i) + " must be a number or [re, im]");
        }
    }
    ExpSumSpec s = ExpSumSpec::canonical(N, std::move(eta), std::move(b));
    if (j.contains("xi")) {
        if (!j["xi"].is_array() || j["xi"].size() != n) throw std::invalid_argument("spec field 'xi' must be an array of length N");
        for (std::size_t i = 0; i < n; ++i) s.xi[i] = number_at(j["xi"], i, "xi");
        // Keep the canonical values bit-exact when the file spells them out.
        for (std::size_t i = 0; i < n; ++i) {
            const long double c = static_cast<long double>(i + 1) / static_cast<long double>(N);
            if (static_cast<double>(c) == static_cast<double>(s.xi[i])) s.xi[i] = c;
        }
    }
    s.check();
    return s;
}

nlohmann::json to_json(const GridSpec& g) {
    return {{"x_lo", static_cast<double>(g.x_lo)}, {"x_hi", static_cast<double>(g.x_hi)}, {"Mx", g.Mx},
            {"t_lo", static_cast<double>(g.t_lo)}, {"t_hi", static_cast<double>(g.t_hi)}, {"Mt", g.Mt}};
}

GridSpec grid_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw std::invalid_argument("grid must be a JSON object");
    GridSpec g;
    auto num = [&](const char* f) {
        if (!j.contains(f) || !j[f].is_number()) throw std::invalid_argument(std::string("grid field '") + f + "' missing or not a number");
        return j[f].get<long double>();
    };
    auto count = [&](const char* f) {
        if (!j.contains(f) || !j[f].is_number_integer()) throw std::invalid_argument(std::string("grid field '") + f + "' missing or not an integer");
        return j[f].get<std::int64_t>();
    };
    g.x_lo = num("x_lo");
    g.x_hi = num("x_hi");
    g.Mx = count("Mx");
    g.t_lo = num("t_lo");
    g.t_hi = num("t_hi");
    g.Mt = count("Mt");
    g.check();
    return g;
}

nlohmann::json to_json(const SupNormResult& r, bool with_profile) {
    nlohmann::json j{{"p", r.p},
                     {"direction", to_string(r.direction)},
                     {"value", r.value},
                     {"grid", to_json(r.grid)},
                     {"kernel", to_string(r.kernel)},
                     {"stratified", r.stratified}};
    if (with_profile) {
        j["outer_sup"] = r.outer_sup;
        nlohmann::json a = nlohmann::json::array();
        for (auto v : r.argmax) a.push_back(static_cast<double>(v));
        j["argmax"] = a;
    }
    return j;
}

nlohmann::json to_json(const LevelSetReport& r) {
    nlohmann::json levels = nlohmann::json::array();
    for (const auto& l : r.levels) levels.push_back({{"alpha", l.alpha}, {"measure", l.measure}, {"statistic", l.statistic}});
    return {{"N", r.N},
            {"direction", to_string(r.direction)},
            {"l1", r.l1},
            {"l2", r.l2},
            {"observed_max", r.observed_max},
            {"max_statistic", r.max_statistic},
            {"argmax_alpha", r.argmax_alpha},
            {"grid", to_json(r.grid)},
            {"levels", levels}};
}

}  // namespace convexsum
