#include "cli.hpp"

#include "convexsum/convexseq.hpp"
#include "convexsum/errors.hpp"
#include "convexsum/experiments.hpp"
#include "convexsum/expsum.hpp"
#include "convexsum/interp.hpp"
#include "convexsum/io.hpp"
#include "convexsum/rational.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace convexsum::cli {

namespace {

using nlohmann::json;

// Thrown by subcommands whose output is a failed check (exit code 2).
struct ValidationFailure {
    json document;
};

struct RunConfig {
    std::string command;
    std::string target;  // experiment id
    std::vector<std::int64_t> N;
    std::vector<std::string> alpha;
    std::int64_t grid_budget = std::int64_t{1} << 24;
    std::optional<double> tol;
    std::uint64_t seed = 0;
    std::string out;
    std::string format = "json";
    std::string fast_path = "auto";
    int threads = 0;  // not part of the recorded config: results do not depend on it

    std::string in, knots, spec, grid, hits, mode = "c2", direction, lo, hi, points;
    std::int64_t qmax = 0;
    double p = 4;
    std::optional<double> level_alpha;
    bool levels = false, count_only = false, dump = false, profile = false;
    std::int64_t Mx = 0, Mt = 0;
    std::optional<double> x_lo, x_hi, t_lo, t_hi;
    std::int64_t samples = 10000;

    json to_json() const {
        json j{{"command", command},
               {"N", N},
               {"alpha", alpha},
               {"grid_budget", grid_budget},
               {"tol", tol ? json(*tol) : json(nullptr)},
               {"seed", seed},
               {"out", out},
               {"format", format},
               {"fast_path", fast_path}};
        if (!target.empty()) j["experiment"] = target;
        auto put = [&](const char* k, const std::string& v) {
            if (!v.empty()) j[k] = v;
        };
        put("in", in);
        put("knots", knots);
        put("spec", spec);
        put("grid", grid);
        put("direction", direction);
        put("lo", lo);
        put("hi", hi);
        put("points", points);
        if (command == "interp") {
            j["mode"] = mode;
            j["samples"] = samples;
        }
        if (command == "farey") j["qmax"] = qmax;
        if (command == "expsum") {
            j["p"] = p;
            j["levels"] = levels;
            if (level_alpha) j["level_alpha"] = *level_alpha;
        }
        return j;
    }
};

long double parse_alpha(const std::string& s) {
    if (s.find('/') != std::string::npos) return Rational::parse(s).to_long_double();
    std::size_t used = 0;
    long double v = 0;
    try {
        v = std::stold(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size()) throw std::invalid_argument("--alpha: '" + s + "' is not a number or p/q");
    return v;
}

std::int64_t single_N(const RunConfig& c) {
    if (c.N.size() != 1) throw std::invalid_argument("--N: exactly one value required for '" + c.command + "'");
    return c.N.front();
}

long double single_alpha(const RunConfig& c) {
    if (c.alpha.size() != 1) throw std::invalid_argument("--alpha: exactly one value required for '" + c.command + "'");
    return parse_alpha(c.alpha.front());
}

json envelope(const RunConfig& c) { return json{{"version", kVersion}, {"config", c.to_json()}}; }

void emit(const RunConfig& c, const json& doc, std::ostream& out) {
    const std::string text = doc.dump(2) + "\n";
    if (c.out.empty()) out << text;
    else write_file_atomic(c.out, text);
}

ConvexSequence sequence_input(const RunConfig& c) {
    if (!c.in.empty()) return read_sequence_csv_file(c.in);
    return construct_sequence(single_N(c), single_alpha(c));
}

// ---------------------------------------------------------------- construct

void cmd_construct(const RunConfig& c, std::ostream& out) {
    const std::int64_t N = single_N(c);
    const long double alpha = single_alpha(c);
    const ConvexSequence seq = construct_sequence(N, alpha);
    const ConvexityReport rep = validate(seq);
    const long double tol = c.tol ? static_cast<long double>(*c.tol) : default_intersect_tol(N, alpha);

    json doc = envelope(c);
    doc["N"] = N;
    doc["alpha"] = static_cast<double>(alpha);
    doc["metadata"] = to_json(seq.metadata());
    doc["validate"] = to_json(rep);
    doc["hit_count"] = seq.hits().size();
    doc["intersect_count"] = intersect_count(seq, alpha, tol).count;
    doc["hits"] = hits_to_json(seq);

    if (c.format == "csv") {
        std::ostringstream csv;
        write_sequence_csv(csv, seq);
        if (c.out.empty()) {
            out << csv.str();
            if (!c.hits.empty()) write_file_atomic(c.hits, doc["hits"].dump(2) + "\n");
            return;
        }
        const std::string hits_path = c.hits.empty() ? c.out + ".hits.json" : c.hits;
        write_file_atomic(c.out, csv.str());
        write_file_atomic(hits_path, doc["hits"].dump(2) + "\n");
        doc.erase("hits");
        doc["files"] = {{"sequence", c.out}, {"hits", hits_path}};
        out << doc.dump(2) << "\n";
        return;
    }
    json values = json::array();
    for (auto v : seq.values()) values.push_back(format_long_double(v));
    doc["values"] = values;
    emit(c, doc, out);
}

// ----------------------------------------------------------------- validate

void cmd_validate(const RunConfig& c, std::ostream& out) {
    const ConvexSequence seq = sequence_input(c);
    const ConvexityReport rep = validate(seq);
    json doc = envelope(c);
    doc["N"] = seq.N();
    doc["report"] = to_json(rep);
    if (!c.alpha.empty()) {
        const long double alpha = single_alpha(c);
        const long double tol = c.tol ? static_cast<long double>(*c.tol) : default_intersect_tol(seq.N(), alpha);
        const IntersectResult ir = intersect_count(seq, alpha, tol);
        doc["intersect"] = {{"alpha", static_cast<double>(alpha)}, {"tol", static_cast<double>(tol)}, {"count", ir.count},
                            {"indices", ir.indices}};
    }
    if (!rep.pass) throw ValidationFailure{doc};
    emit(c, doc, out);
}

// ------------------------------------------------------------------- interp

std::vector<Knot> knots_from_json(const json& j) {
    const json& arr = j.is_object() && j.contains("knots") ? j["knots"] : j;
    if (!arr.is_array()) throw std::invalid_argument("knots file: field 'knots' must be an array of [x, y, p]");
    std::vector<Knot> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const auto& k = arr[i];
        if (!k.is_array() || k.size() != 3 || !k[0].is_number() || !k[1].is_number() || !k[2].is_number())
            throw std::invalid_argument("knots file: entry " + std::to_string(i) + " must be [x, y, p]");
        out.push_back({k[0].get<double>(), k[1].get<double>(), k[2].get<double>()});
    }
    return out;
}

void cmd_interp(const RunConfig& c, std::ostream& out) {
    if (c.mode != "c1" && c.mode != "c2") throw std::invalid_argument("--mode must be c1 or c2");
    std::vector<Knot> knots;
    if (!c.knots.empty()) knots = knots_from_json(read_json_file(c.knots));
    else knots = knots_from_sequence(sequence_input(c));
    ConvexInterpolant f = build_c1(knots);
    if (c.mode == "c2") f = upgrade_c2(f);
    const InterpInvariants inv = check_invariants(f, static_cast<std::size_t>(c.samples));
    json doc = envelope(c);
    doc["knot_count"] = knots.size();
    doc["D"] = f.D();
    doc["invariants"] = {{"max_area_error", inv.max_area_error},
                         {"max_knot_value_error", inv.max_knot_value_error},
                         {"max_knot_slope_error", inv.max_knot_slope_error},
                         {"max_fp_jump", inv.max_fp_jump},
                         {"max_fpp_jump", inv.max_fpp_jump},
                         {"max_knot_fpp_rel_error", inv.max_knot_fpp_rel_error},
                         {"min_fpp", inv.min_fpp},
                         {"samples", inv.samples},
                         {"pass", inv.pass}};
    if (c.dump || !c.out.empty()) doc["interpolant"] = to_json(f);
    if (!inv.pass) throw ValidationFailure{doc};
    emit(c, doc, out);
}

// -------------------------------------------------------------------- farey

void cmd_farey(const RunConfig& c, std::ostream& out) {
    if (c.lo.empty() || c.hi.empty()) throw std::invalid_argument("farey: --lo and --hi are required");
    if (c.qmax < 1) throw std::invalid_argument("farey: --qmax must be >= 1");
    const Rational lo = Rational::parse(c.lo), hi = Rational::parse(c.hi);
    json doc = envelope(c);
    if (c.count_only) {
        doc["count"] = count_fractions(lo, hi, c.qmax);
    } else {
        const auto fr = enumerate_fractions(lo, hi, c.qmax);
        json list = json::array();
        for (const auto& r : fr) list.push_back(r.str());
        doc["count"] = fr.size();
        doc["fractions"] = list;
    }
    emit(c, doc, out);
}

// ------------------------------------------------------------------- expsum

void cmd_expsum(const RunConfig& c, std::ostream& out) {
    if (c.spec.empty()) throw std::invalid_argument("expsum: --spec is required");
    const ExpSumSpec spec = spec_from_json(read_json_file(c.spec));
    GridSpec grid;
    if (!c.grid.empty()) {
        grid = grid_from_json(read_json_file(c.grid));
    } else {
        const long double N = static_cast<long double>(spec.N);
        grid.x_lo = c.x_lo.value_or(0);
        grid.x_hi = c.x_hi ? static_cast<long double>(*c.x_hi) : N;
        grid.Mx = c.Mx > 0 ? c.Mx : 4 * spec.N;
        grid.t_lo = c.t_lo.value_or(0);
        grid.t_hi = c.t_hi ? static_cast<long double>(*c.t_hi) : N * N;
        grid.Mt = c.Mt > 0 ? c.Mt : std::min<std::int64_t>(4 * spec.N * spec.N, c.grid_budget);
        grid.check();
    }
    EvalOptions opts;
    opts.fast_path = fast_path_from_string(c.fast_path);
    const Direction dir = direction_from_string(c.direction.empty() ? "t" : c.direction);

    json doc = envelope(c);
    doc["N"] = spec.N;
    doc["b_l1"] = spec.l1_norm();
    doc["b_l2"] = spec.l2_norm();
    const SupNormResult sup = sup_norm_Lp(spec, grid, dir, c.p, opts);
    doc["norm"] = to_json(sup, c.profile);
    if (c.level_alpha) {
        doc["level_set"] = {{"alpha", *c.level_alpha},
                            {"direction", to_string(dir)},
                            {"measure", level_set_projection(spec, grid, *c.level_alpha, dir, opts)}};
    }
    if (c.levels) doc["levels"] = to_json(dyadic_level_report(spec, grid, dir, opts));
    emit(c, doc, out);
}

// --------------------------------------------------------------- experiment

void cmd_experiment(const RunConfig& c, std::ostream& out) {
    if (c.target.size() != 1 || std::string("ABC").find(c.target) == std::string::npos)
        throw std::invalid_argument("experiment: id must be A, B or C");
    if (c.N.empty()) throw std::invalid_argument("--N: at least one value required");
    ExperimentConfig cfg;
    cfg.grid_budget = c.grid_budget;
    cfg.seed = c.seed;
    cfg.eval.fast_path = fast_path_from_string(c.fast_path);
    json doc = envelope(c);
    json reports = json::array();
    std::vector<std::pair<double, double>> pts;
    bool pass = true;
    for (auto N : c.N) {
        cfg.N = N;
        const ExperimentReport r = run_experiment(c.target[0], cfg);
        pass = pass && r.identity.pass;
        reports.push_back(to_json(r));
        pts.emplace_back(static_cast<double>(N), r.norm.value / r.b_norm);
    }
    if (c.N.size() == 1) {
        doc["report"] = reports[0];
    } else {
        doc["reports"] = reports;
        if (pts.size() >= 3) doc["regression"] = to_json(regress(pts));
    }
    if (!pass) throw ValidationFailure{doc};
    emit(c, doc, out);
}

// --------------------------------------------------------------------- scan

void cmd_scan(const RunConfig& c, std::ostream& out) {
    if (c.N.size() < 3) throw std::invalid_argument("scan: --N needs at least 3 values");
    if (c.alpha.empty()) throw std::invalid_argument("scan: --alpha is required");
    std::vector<double> alphas;
    for (const auto& a : c.alpha) alphas.push_back(static_cast<double>(parse_alpha(a)));
    json doc = envelope(c);
    json res = json::array();
    for (const auto& r : intersection_scan(c.N, alphas)) res.push_back(to_json(r));
    doc["results"] = res;
    emit(c, doc, out);
}

// ------------------------------------------------------------------ regress

std::vector<std::pair<double, double>> parse_points(const std::string& text, const std::string& where) {
    std::vector<std::pair<double, double>> pts;
    std::istringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw std::invalid_argument(where + ": expected N:value, got '" + item + "'");
        try {
            pts.emplace_back(std::stod(item.substr(0, colon)), std::stod(item.substr(colon + 1)));
        } catch (const std::exception&) {
            throw std::invalid_argument(where + ": malformed point '" + item + "'");
        }
    }
    return pts;
}

std::vector<std::pair<double, double>> read_points_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const auto first = text.find_first_not_of(" \t\r\n");
    std::vector<std::pair<double, double>> pts;
    if (first != std::string::npos && text[first] == '[') {
        const json j = json::parse(text);
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (!j[i].is_array() || j[i].size() != 2 || !j[i][0].is_number() || !j[i][1].is_number())
                throw std::invalid_argument("points file: entry " + std::to_string(i) + " must be [N, value]");
            pts.emplace_back(j[i][0].get<double>(), j[i][1].get<double>());
        }
        return pts;
    }
    std::istringstream ss(text);
    std::string line;
    std::size_t row = 0;
    while (std::getline(ss, line)) {
        ++row;
        if (line.empty() || line[0] == '#') continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw std::invalid_argument("points file line " + std::to_string(row) + ": expected N,value");
        try {
            pts.emplace_back(std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1)));
        } catch (const std::exception&) {
            if (row == 1) continue;  // header
            throw std::invalid_argument("points file line " + std::to_string(row) + ": malformed number");
        }
    }
    return pts;
}

void cmd_regress(const RunConfig& c, std::ostream& out) {
    std::vector<std::pair<double, double>> pts;
    if (!c.in.empty()) pts = read_points_file(c.in);
    else if (!c.points.empty()) pts = parse_points(c.points, "--points");
    else throw std::invalid_argument("regress: --in or --points is required");
    json doc = envelope(c);
    doc["regression"] = to_json(regress(pts));
    emit(c, doc, out);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Convex sequences, lattice hits and exponential-sum maximal functions", "convexsum"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    app.fallthrough();

    RunConfig c;
    const char* env_threads = std::getenv("CONVEXSUM_THREADS");
    if (env_threads) c.threads = std::atoi(env_threads);

    app.add_option("--N", c.N, "N (comma-separated list where allowed)")->delimiter(',');
    app.add_option("--alpha", c.alpha, "lattice exponent alpha, decimal or p/q")->delimiter(',');
    app.add_option("--grid-budget", c.grid_budget, "cap on t-grid points")->check(CLI::PositiveNumber);
    app.add_option("--tol", c.tol, "intersection tolerance (0 = exact)")->check(CLI::NonNegativeNumber);
    app.add_option("--seed", c.seed, "seed for sampled identity checks");
    app.add_option("--out", c.out, "output path (stdout when omitted)");
    app.add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--threads", c.threads, "OpenMP threads (default: CONVEXSUM_THREADS or all cores)")->check(CLI::NonNegativeNumber);
    app.add_option("--fast-path", c.fast_path, "FFT fast path: auto, on or off")->check(CLI::IsMember({"auto", "on", "off"}));

    auto* construct = app.add_subcommand("construct", "emit a constructed sequence (CSV) and its hits (JSON)");
    construct->add_option("--hits", c.hits, "path for the hits JSON");

    auto* validate_cmd = app.add_subcommand("validate", "uniform convexity report; exit 2 when it fails");
    validate_cmd->add_option("--in", c.in, "sequence CSV");

    auto* interp = app.add_subcommand("interp", "build an interpolant and run its invariant suite");
    interp->add_option("--knots", c.knots, "knots JSON, [[x, y, p], ...]");
    interp->add_option("--in", c.in, "sequence CSV");
    interp->add_option("--mode", c.mode, "c1 or c2");
    interp->add_option("--samples", c.samples, "invariant sample count")->check(CLI::PositiveNumber);
    interp->add_flag("--dump", c.dump, "include the interpolant in the output");

    auto* farey = app.add_subcommand("farey", "fractions in [lo, hi] with denominator <= qmax");
    farey->add_option("--lo", c.lo, "lower end, p/q")->required();
    farey->add_option("--hi", c.hi, "upper end, p/q")->required();
    farey->add_option("--qmax", c.qmax, "denominator bound")->required();
    farey->add_flag("--count-only", c.count_only, "print only the count");

    auto* expsum = app.add_subcommand("expsum", "maximal-function norm and level sets of a spec file");
    expsum->add_option("--spec", c.spec, "spec JSON {N, xi?, eta, b}")->required();
    expsum->add_option("--grid", c.grid, "grid JSON {x_lo, x_hi, Mx, t_lo, t_hi, Mt}");
    expsum->add_option("--direction", c.direction, "variable to maximize over: t or x")->check(CLI::IsMember({"t", "x"}));
    expsum->add_option("--p", c.p, "Lebesgue exponent")->check(CLI::Range(1.0, 1e6));
    expsum->add_option("--Mx", c.Mx, "x-grid points");
    expsum->add_option("--Mt", c.Mt, "t-grid points");
    expsum->add_option("--x-lo", c.x_lo);
    expsum->add_option("--x-hi", c.x_hi);
    expsum->add_option("--t-lo", c.t_lo);
    expsum->add_option("--t-hi", c.t_hi);
    expsum->add_option("--level-alpha", c.level_alpha, "projected measure of the level set at this alpha");
    expsum->add_flag("--levels", c.levels, "dyadic level report");
    expsum->add_flag("--profile", c.profile, "include per-node sups and argmax");

    auto* experiment = app.add_subcommand("experiment", "witness experiment A, B or C");
    experiment->add_option("id", c.target, "A, B or C")->required();

    app.add_subcommand("scan", "hit counts of the constructions and their log-log slope");

    auto* regress_cmd = app.add_subcommand("regress", "log-log least squares");
    regress_cmd->add_option("--in", c.in, "CSV of N,value or JSON [[N, value], ...]");
    regress_cmd->add_option("--points", c.points, "inline N:value,N:value,...");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    const CLI::App* sub = app.get_subcommands().front();
    c.command = sub->get_name();
    if (c.threads > 0) omp_set_num_threads(c.threads);

    try {
        if (c.command == "construct") cmd_construct(c, out);
        else if (c.command == "validate") cmd_validate(c, out);
        else if (c.command == "interp") cmd_interp(c, out);
        else if (c.command == "farey") cmd_farey(c, out);
        else if (c.command == "expsum") cmd_expsum(c, out);
        else if (c.command == "experiment") cmd_experiment(c, out);
        else if (c.command == "scan") cmd_scan(c, out);
        else if (c.command == "regress") cmd_regress(c, out);
        return 0;
    } catch (const ValidationFailure& f) {
        emit(c, f.document, out);
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace convexsum::cli
