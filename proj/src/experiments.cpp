#include "convexsum/experiments.hpp"
#include "convexsum/convexseq.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

namespace convexsum {

namespace {

std::vector<std::complex<double>> indicator(std::int64_t N, const std::vector<std::int64_t>& hits) {
    std::vector<std::complex<double>> b(static_cast<std::size_t>(N), 0.0);
    for (auto n : hits) b[static_cast<std::size_t>(n - 1)] = 1.0;
    return b;
}

std::vector<std::int64_t> certified_indices(const ConvexSequence& s) {
    std::vector<std::int64_t> out;
    for (const auto& h : s.hits()) {
        if (h.is_lattice_member()) out.push_back(h.n);
    }
    return out;
}

}  // namespace

ExperimentSetup setup_experiment(char id, std::int64_t N, std::int64_t grid_budget) {
    if (N < 64) throw std::invalid_argument("experiments require N >= 64");
    if (grid_budget < 1) throw std::invalid_argument("grid budget must be positive");
    ExperimentSetup s;
    s.id = id;
    s.N = N;
    const long double Nl = static_cast<long double>(N);
    const std::int64_t full_t = 4 * N * N;
    s.grid.Mt = std::min(full_t, grid_budget);
    s.grid.t_lo = 0;
    s.grid.t_hi = Nl * Nl;
    s.stratified = full_t > grid_budget;

    switch (id) {
        case 'A': {
            const ConvexSequence c = construct_dirichlet_like(N, 1);
            s.alpha = 1;
            s.hit_indices = certified_indices(c);
            s.sequence = shear(c, Rational(BigInt(-1), BigInt(N) * N));
            s.spec = ExpSumSpec::canonical(N, s.sequence.values(), indicator(N, s.hit_indices));
            s.grid.x_lo = 0;
            s.grid.x_hi = Nl;
            s.grid.Mx = 4 * N;
            s.sup_direction = Direction::T;
            s.exponent = 7.0 / 12;
            break;
        }
        case 'B': {
            s.sequence = construct_small_alpha(N, 0.5L);
            s.alpha = 0.5;
            s.hit_indices = certified_indices(s.sequence);
            s.spec = ExpSumSpec::canonical(N, s.sequence.values(), indicator(N, s.hit_indices));
            s.grid.x_lo = 0;
            s.grid.x_hi = Nl;
            s.grid.Mx = 4 * N;
            s.sup_direction = Direction::X;
            s.exponent = 5.0 / 8;
            s.stratified = false;
            break;
        }
        case 'C': {
            s.sequence = construct_dirichlet_like(N, 1);
            s.alpha = 1;
            s.hit_indices = certified_indices(s.sequence);
            const auto& a = s.sequence.values();
            std::vector<long double> xi(a.size());
            for (std::size_t i = 0; i < a.size(); ++i) xi[i] = (static_cast<long double>(i + 1) - a[i]) / Nl;
            s.spec = ExpSumSpec::canonical(N, a, indicator(N, s.hit_indices));
            s.spec.xi = std::move(xi);
            s.grid.x_lo = 0;
            s.grid.x_hi = Nl * Nl;
            s.grid.Mx = 4 * N;
            s.sup_direction = Direction::X;
            s.exponent = 5.0 / 6;
            s.stratified = false;
            break;
        }
        default: throw std::invalid_argument(std::string("unknown experiment '") + id + "'");
    }
    return s;
}

std::pair<long double, long double> identity_node(const ExperimentSetup& s, std::int64_t j) {
    const long double jl = static_cast<long double>(j), Nl = static_cast<long double>(s.N);
    switch (s.id) {
        case 'A': return {jl, jl * Nl};
        case 'B': return {0, jl * std::sqrt(Nl)};
        case 'C': return {jl * Nl, jl};
    }
    throw std::invalid_argument("unknown experiment");
}

std::vector<std::int64_t> identity_points(const ExperimentSetup& s, std::uint64_t seed, int samples) {
    std::vector<std::int64_t> js;
    if (s.id == 'A') {
        for (std::int64_t j = 1; j <= s.N; ++j) js.push_back(j);
        return js;
    }
    const std::int64_t hi = s.id == 'B' ? static_cast<std::int64_t>(std::floor(std::pow(static_cast<long double>(s.N), 1.5L) + 1e-9L))
                                        : s.N * s.N;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::int64_t> dist(1, hi);
    std::set<std::int64_t> picked;
    const auto want = static_cast<std::size_t>(std::min<std::int64_t>(samples, hi));
    while (picked.size() < want) picked.insert(dist(rng));
    return {picked.begin(), picked.end()};
}

IdentityCheck check_identity(const ExperimentSetup& s, const std::vector<std::int64_t>& js, double rel_tol) {
    IdentityCheck c;
    c.checked_j = js;
    const double H = static_cast<double>(s.hit_indices.size());
    if (H == 0) throw std::runtime_error("identity check: construction has no certified hits");
    for (auto j : js) {
        const auto [x, t] = identity_node(s, j);
        const double err = std::abs(eval_point(s.spec, x, t) - std::complex<double>(H, 0)) / H;
        c.max_rel_error = std::max(c.max_rel_error, err);
    }
    c.pass = c.max_rel_error <= rel_tol;
    return c;
}

ExperimentReport run_experiment(char id, const ExperimentConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    const ExperimentSetup s = setup_experiment(id, cfg.N, cfg.grid_budget);
    ExperimentReport r;
    r.id = std::string(1, id);
    r.N = cfg.N;
    r.alpha = s.alpha;
    r.hit_count = s.hit_indices.size();
    r.seed = cfg.seed;
    r.construction = s.sequence.metadata();
    r.identity = check_identity(s, identity_points(s, cfg.seed, cfg.identity_samples));
    EvalOptions eval = cfg.eval;
    eval.stratified = eval.stratified || s.stratified;
    r.norm = sup_norm_Lp(s.spec, s.grid, s.sup_direction, 4.0, eval);
    r.predicted_exponent = s.exponent;
    r.b_norm = s.spec.l2_norm();
    r.ratio = r.norm.value / (std::pow(static_cast<double>(cfg.N), s.exponent) * r.b_norm);
    r.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

ExperimentReport experiment_A(const ExperimentConfig& cfg) { return run_experiment('A', cfg); }
ExperimentReport experiment_B(const ExperimentConfig& cfg) { return run_experiment('B', cfg); }
ExperimentReport experiment_C(const ExperimentConfig& cfg) { return run_experiment('C', cfg); }

RegressionResult regress(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 3) throw std::invalid_argument("regress: need at least 3 points");
    RegressionResult r;
    for (const auto& [n, v] : points) {
        if (!(n > 0)) throw std::invalid_argument("regress: N must be positive");
        if (!(v > 0)) throw std::invalid_argument("regress: values must be positive");
        r.points.emplace_back(std::log(n), std::log(v));
    }
    const double m = static_cast<double>(r.points.size());
    double sx = 0, sy = 0;
    for (const auto& [x, y] : r.points) {
        sx += x;
        sy += y;
    }
    const double mx = sx / m, my = sy / m;
    double sxx = 0, sxy = 0;
    for (const auto& [x, y] : r.points) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if (!(sxx > 0)) throw std::invalid_argument("regress: all N equal, slope undefined");
    r.slope = sxy / sxx;
    r.intercept = my - r.slope * mx;
    double ss = 0;
    for (const auto& [x, y] : r.points) {
        const double e = y - (r.intercept + r.slope * x);
        ss += e * e;
    }
    r.residual = std::sqrt(ss / m);
    return r;
}

std::vector<ScanResult> intersection_scan(const std::vector<std::int64_t>& Ns, const std::vector<double>& alphas) {
    std::vector<ScanResult> out;
    for (double alpha : alphas) {
        ScanResult s;
        s.alpha = alpha;
        s.construction = alpha <= 0.5 ? "small_alpha" : "dirichlet_like";
        s.target = alpha >= 0.5 ? (alpha + 1) / 3 : alpha;
        std::vector<std::pair<double, double>> pts;
        for (auto N : Ns) {
            if (N < 64) throw std::invalid_argument("intersection_scan: N must be >= 64");
            const ConvexSequence seq = construct_sequence(N, alpha);
            const std::size_t cert = certified_indices(seq).size();
            s.N.push_back(N);
            s.certified.push_back(cert);
            s.float_count.push_back(intersect_count(seq, alpha, default_intersect_tol(N, alpha)).count);
            pts.emplace_back(static_cast<double>(N), static_cast<double>(cert));
        }
        s.fit = regress(pts);
        out.push_back(std::move(s));
    }
    return out;
}

nlohmann::json to_json(const IdentityCheck& c) {
    return {{"checked_j", c.checked_j}, {"pass", c.pass}, {"max_rel_error", c.max_rel_error}};
}

nlohmann::json to_json(const ExperimentReport& r) {
    return {{"id", r.id},
            {"N", r.N},
            {"alpha", r.alpha},
            {"hit_count", r.hit_count},
            {"identity", to_json(r.identity)},
            {"norm", to_json(r.norm)},
            {"predicted_exponent", r.predicted_exponent},
            {"b_norm", r.b_norm},
            {"ratio", r.ratio},
            {"seed", r.seed},
            {"construction",
             {{"name", r.construction.construction},
              {"scale", r.construction.scale},
              {"shear", static_cast<double>(r.construction.shear)},
              {"knot_count", r.construction.knot_count},
              {"trimmed_knots", r.construction.trimmed_knots}}}};
}

nlohmann::json to_json(const RegressionResult& r) {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& [x, y] : r.points) pts.push_back({x, y});
    return {{"points", pts}, {"slope", r.slope}, {"intercept", r.intercept}, {"residual", r.residual}};
}

nlohmann::json to_json(const ScanResult& s) {
    return {{"alpha", s.alpha},         {"construction", s.construction}, {"N", s.N},
            {"certified", s.certified}, {"float_count", s.float_count},   {"target", s.target},
            {"fit", to_json(s.fit)}};
}

}  // namespace convexsum
