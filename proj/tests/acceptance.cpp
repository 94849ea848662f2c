// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include "oracles.hpp"

#include "convexsum/convexseq.hpp"
#include "convexsum/errors.hpp"
#include "convexsum/experiments.hpp"
#include "convexsum/expsum.hpp"
#include "convexsum/interp.hpp"
#include "convexsum/rational.hpp"

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

using namespace convexsum;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            if (!pass) detail << "; ";
            else detail.str("");
            pass = false;
            detail << what;
        }
    }
};

using Criterion = std::function<void(Outcome&)>;

void identities(Outcome& o) {
    for (std::int64_t N : {64, 128, 256}) {
        for (char id : {'A', 'B', 'C'}) {
            const ExperimentSetup s = setup_experiment(id, N, std::int64_t{1} << 24);
            const IdentityCheck c = check_identity(s, identity_points(s, 7, 64));
            const std::size_t want = id == 'A' ? static_cast<std::size_t>(N) : 64;
            o.require(c.pass && c.checked_j.size() == want,
                      std::string(1, id) + " N=" + std::to_string(N) + " rel err " + std::to_string(c.max_rel_error));
        }
    }
    if (o.pass) o.detail << "A/B/C at N=64,128,256, rel err <= 1e-6";
}

void convexity(Outcome& o) {
    double worst = 0;
    std::size_t hits = 0;
    for (std::int64_t N : {256, 1024, 4096}) {
        for (long double alpha : {1.0L, 1.5L, 2.0L}) {
            const ConvexSequence s = construct_dirichlet_like(N, alpha);
            const ConvexityReport r = validate(s);
            worst = std::max(worst, r.tightest_C);
            o.require(r.pass && r.tightest_C <= 8,
                      "alpha=" + std::to_string(static_cast<double>(alpha)) + " N=" + std::to_string(N) + " C=" + std::to_string(r.tightest_C));
            const Rational spacing(BigInt(1), *exact_integer_power(N, alpha));
            for (const auto& h : s.hits()) {
                ++hits;
                o.require(h.is_lattice_member() && s.at(h.n) == (h.coordinate * spacing).to_long_double(),
                          "non-lattice hit at n=" + std::to_string(h.n));
            }
        }
        // alpha = 1/2 has no admissible denominators; the small-alpha recipe covers it
        bool infeasible = false;
        try {
            construct_dirichlet_like(N, 0.5L);
        } catch (const ConstructionInfeasible&) {
            infeasible = true;
        }
        const ConvexSequence half = construct_small_alpha(N, 0.5L);
        const ConvexityReport r = validate(half);
        worst = std::max(worst, r.tightest_C);
        o.require(infeasible, "alpha=0.5 N=" + std::to_string(N) + " dirichlet did not report infeasible");
        o.require(r.pass && r.tightest_C <= 8, "alpha=0.5 small-alpha N=" + std::to_string(N) + " C=" + std::to_string(r.tightest_C));
        for (const auto& h : half.hits()) o.require(h.is_lattice_member(), "non-lattice small-alpha hit");
    }
    if (o.pass) o.detail << "worst C " << worst << ", " << hits << " certified hits; alpha=0.5 via small-alpha";
}

void check_interp(Outcome& o, const std::vector<Knot>& knots, const std::string& name) {
    const ConvexInterpolant c2 = upgrade_c2(build_c1(knots));
    const InterpInvariants inv = check_invariants(c2, 10000);
    o.require(inv.max_area_error <= 1e-12, name + " area " + std::to_string(inv.max_area_error));
    o.require(inv.max_knot_value_error <= 1e-10 && inv.max_knot_slope_error <= 1e-10, name + " knot match");
    o.require(inv.max_knot_fpp_rel_error <= 1e-6, name + " f'' at knots");
    o.require(inv.min_fpp > 0 && inv.samples == 10000, name + " convexity");
    for (const auto& p : c2.pieces()) {
        if (p.padding || p.kind != PieceKind::Sinusoid) continue;
        o.require(std::fabs(p.alpha / std::tan(p.alpha) - c2.D() / p.slope()) <= 1e-12, name + " alpha cot alpha");
    }
}

void interpolation(Outcome& o) {
    check_interp(o, {{0, 0, 0}, {1, 0.5, 1}}, "symmetric pair");
    check_interp(o, {{0, 0, 0}, {1, 1.0 / 3, 1}}, "asymmetric pair");
    std::mt19937_64 rng(20240);
    for (int trial = 0; trial < 100; ++trial) check_interp(o, oracle::random_knots(rng, 3 + trial % 12), "set " + std::to_string(trial));
    if (o.pass) o.detail << "100 seeded sets + 2 worked examples";
}

void farey(Outcome& o) {
    std::mt19937_64 rng(4242);
    std::uniform_int_distribution<std::int64_t> qdist(2, 200), den(1, 64), start(-300, 300), width(1, 160);
    double dmin = 1e9, dmax = 0;
    int dense = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::int64_t qmax = qdist(rng), d = den(rng), a = start(rng), w = width(rng);
        const Rational lo{BigInt(a), BigInt(d)}, hi{BigInt(a + w), BigInt(d)};
        const auto got = enumerate_fractions(lo, hi, qmax);
        o.require(got == oracle::brute_force_fractions(lo, hi, qmax), "mismatch at trial " + std::to_string(trial));
        const double x = static_cast<double>(w) / static_cast<double>(d), y = static_cast<double>(qmax);
        if (x * y >= 100) {
            const double density = static_cast<double>(got.size()) / (x * y * y);
            dmin = std::min(dmin, density);
            dmax = std::max(dmax, density);
            ++dense;
            o.require(density >= 0.15 && density <= 0.6, "density " + std::to_string(density));
        }
    }
    if (o.pass) o.detail << "200 triples match; density in [" << dmin << ", " << dmax << "] over " << dense << " cases";
}

void scaling(Outcome& o) {
    for (const auto& r : intersection_scan({256, 1024, 4096}, {1.0, 1.5, 2.0, 0.25})) {
        o.detail << (o.detail.tellp() > 0 ? ", " : "") << "alpha " << r.alpha << " slope " << r.fit.slope;
        o.require(std::fabs(r.fit.slope - r.target) <= 0.15,
                  "alpha " + std::to_string(r.alpha) + " slope " + std::to_string(r.fit.slope) + " target " + std::to_string(r.target));
    }
}

void norm_brackets(Outcome& o) {
    for (char id : {'A', 'B'}) {
        std::vector<std::pair<double, double>> pts;
        for (std::int64_t N : {64, 128, 256}) {
            ExperimentConfig cfg;
            cfg.N = N;
            cfg.seed = 7;
            const ExperimentReport r = run_experiment(id, cfg);
            pts.emplace_back(static_cast<double>(N), r.norm.value / r.b_norm);
        }
        const double slope = regress(pts).slope;
        const double lo = id == 'A' ? 7.0 / 12 - 0.1 : 5.0 / 8 - 0.1;
        const double hi = id == 'A' ? 7.0 / 12 + 0.12 : 2.0 / 3 + 0.1;
        o.detail << (id == 'B' ? ", " : "") << id << " slope " << slope << " in [" << lo << ", " << hi << "]";
        o.require(slope >= lo && slope <= hi, std::string(1, id) + " slope " + std::to_string(slope));
    }
}

void evaluator(Outcome& o) {
    const std::int64_t N = 256;
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<long double> eta;
    std::vector<std::complex<double>> b;
    for (std::int64_t n = 1; n <= N; ++n) {
        eta.push_back(static_cast<long double>(n * n) / N + 0.37L * n);
        b.emplace_back(u(rng), u(rng));
    }
    const ExpSumSpec spec = ExpSumSpec::canonical(N, eta, b);
    GridSpec g;
    g.x_lo = 0;
    g.x_hi = N;
    g.Mx = 4 * N;
    g.t_lo = 0;
    g.t_hi = 3;
    g.Mt = 512;
    EvalOptions on;
    on.fast_path = FastPath::On;
    const ComplexMatrix F = eval_grid(spec, g, on);

    double worst = 0, period = 0, parseval = 0;
    std::uniform_int_distribution<std::int64_t> jd(0, g.Mt - 1), kd(0, g.Mx - 1);
    for (int i = 0; i < 1000; ++i) {
        const std::int64_t j = jd(rng), k = kd(rng);
        worst = std::max(worst, oracle::rel_err(F(j, k), oracle::naive_eval(spec, g.x(k), g.t(j))));
        const auto shifted = eval_point(spec, g.x(k) + N, g.t(j));
        period = std::max(period, oracle::rel_err(shifted, F(j, k)));
    }
    const double l2sq = spec.l2_norm() * spec.l2_norm();
    for (std::int64_t j = 0; j < g.Mt; ++j) {
        long double s = 0;
        for (std::int64_t k = 0; k < g.Mx; ++k) s += std::norm(F(j, k));
        parseval = std::max(parseval, std::fabs(static_cast<double>(s / g.Mx) - l2sq) / l2sq);
    }
    o.require(worst <= 1e-9, "fft vs naive " + std::to_string(worst));
    o.require(period <= 1e-9, "periodicity " + std::to_string(period));
    o.require(parseval <= 1e-9, "parseval " + std::to_string(parseval));

    const int saved = omp_get_max_threads();
    std::string first;
    bool same = true;
    for (int threads : {1, 2, 4}) {
        omp_set_num_threads(threads);
        ExperimentConfig cfg;
        cfg.N = 64;
        cfg.seed = 7;
        for (char id : {'A', 'B', 'C'}) {
            const std::string dump = to_json(run_experiment(id, cfg)).dump();
            if (threads == 1) first += dump;
            else if (first.find(dump) == std::string::npos) same = false;
        }
    }
    omp_set_num_threads(saved);
    o.require(same, "reports differ across thread counts");
    if (o.pass) o.detail << "fft err " << worst << ", periodicity " << period << ", parseval " << parseval << ", reports identical at 1/2/4 threads";
}

void level_sets(Outcome& o) {
    double lo = 1e300, hi = 0;
    for (std::int64_t N : {64, 128, 256}) {
        const ExperimentSetup s = setup_experiment('A', N, std::int64_t{1} << 24);
        const LevelSetReport r = dyadic_level_report(s.spec, s.grid, Direction::T);
        o.detail << (N == 64 ? "" : ", ") << "N=" << N << " stat " << r.max_statistic;
        lo = std::min(lo, r.max_statistic);
        hi = std::max(hi, r.max_statistic);
    }
    o.detail << ", spread " << hi / lo;
    o.require(hi <= 2 * lo, o.detail.str());
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, Criterion>> criteria{
        {"exact identities", identities},    {"convexity validator", convexity}, {"interpolation", interpolation},
        {"farey oracle", farey},             {"intersection scaling", scaling}, {"norm scaling brackets", norm_brackets},
        {"evaluator checks", evaluator},     {"level-set diagnostic", level_sets}};
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            criteria[i].second(o);
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("criterion %zu (%s): %s: %s [%.1fs]\n", i + 1, criteria[i].first.c_str(), o.pass ? "PASS" : "FAIL",
                    o.detail.str().c_str(), secs);
        std::fflush(stdout);
        if (!o.pass) ++failed;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
