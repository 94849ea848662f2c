#include "convexsum/interp.hpp"

#include "convexsum/convexseq.hpp"
#include "convexsum/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace convexsum {

namespace {

constexpr double kQuarterPi = std::numbers::pi / 4;
constexpr double kHalfPi = std::numbers::pi / 2;

double x_cot_x(double x) { return x * std::cos(x) / std::sin(x); }

}  // namespace

double DerivativePiece::amplitude() const { return (p_hi - p_lo) / (2 * std::sin(alpha)); }

double DerivativePiece::fprime(double x) const {
    if (kind == PieceKind::Linear) return p_lo + slope() * (x - x_lo);
    return mean() + amplitude() * std::sin(alpha * (x - center()) / half_width());
}

double DerivativePiece::fsecond(double x) const {
    if (kind == PieceKind::Linear) return slope();
    return slope() * (alpha / std::sin(alpha)) * std::cos(alpha * (x - center()) / half_width());
}

double DerivativePiece::area_to(double x) const {
    const double dx = x - x_lo;
    if (kind == PieceKind::Linear) return p_lo * dx + 0.5 * slope() * dx * dx;
    // cos(a) - cos(-alpha) written as a product to avoid cancellation near x_lo.
    const double w = half_width();
    const double a = alpha * (x - center()) / w;
    const double cos_diff = -2 * std::sin(0.5 * (a - alpha)) * std::sin(0.5 * (a + alpha));
    return mean() * dx - amplitude() * (w / alpha) * cos_diff;
}

ConvexInterpolant::ConvexInterpolant(std::vector<Knot> knots, std::vector<InternalNode> nodes,
                                     std::vector<DerivativePiece> pieces, double D, InterpMode mode)
    : knots_(std::move(knots)), nodes_(std::move(nodes)), pieces_(std::move(pieces)), D_(D), mode_(mode) {
    if (knots_.empty()) throw std::invalid_argument("interpolant needs at least one knot");
}

std::size_t ConvexInterpolant::piece_index(double x) const {
    if (pieces_.empty() || x < x_begin() || x > x_end())
        throw std::out_of_range("interpolant evaluated outside its domain");
    auto it = std::upper_bound(pieces_.begin(), pieces_.end(), x,
                               [](double v, const DerivativePiece& p) { return v < p.x_lo; });
    return static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, (it - pieces_.begin()) - 1));
}

InterpEval ConvexInterpolant::eval(double x) const {
    if (pieces_.empty()) {
        if (x == knots_.front().x) return {knots_.front().y, knots_.front().p, D_};
        throw std::out_of_range("interpolant evaluated outside its domain");
    }
    const auto& piece = pieces_[piece_index(x)];
    return {piece.y_lo + piece.area_to(x), piece.fprime(x), piece.fsecond(x)};
}

ConvexInterpolant build_c1(std::span<const Knot> knots) {
    if (knots.empty()) throw std::invalid_argument("build_c1: no knots");
    std::vector<InternalNode> nodes;
    std::vector<DerivativePiece> pieces;
    nodes.reserve(knots.size());
    pieces.reserve(2 * knots.size());

    double min_slope = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        const Knot& k1 = knots[i];
        const Knot& k2 = knots[i + 1];
        if (!(k2.x > k1.x)) throw NonInterpolable(i, "x not strictly increasing");
        if (!(k2.y > k1.y)) throw NonInterpolable(i, "y not strictly increasing");
        if (!(k2.p > k1.p)) throw NonInterpolable(i, "p not strictly increasing");
        const double s = (k2.y - k1.y) / (k2.x - k1.x);
        if (!(s > k1.p) || !(s < k2.p))
            throw NonInterpolable(i, "secant slope not strictly between the knot slopes");
        const double c = (s - k1.p) / (k2.p - s);
        if (c < 1e-6 || c > 1e6) throw NonInterpolable(i, "near-collinear knots (c out of [1e-6, 1e6])");

        // (x2 - x0) / (x0 - x1) == c, and (x1,p2), (x0,p0), (x2,p1) collinear.
        const double x0 = (k2.x + c * k1.x) / (1 + c);
        const double p0 = k2.p - (k2.p - k1.p) * (x0 - k1.x) / (k2.x - k1.x);
        nodes.push_back({x0, p0});

        DerivativePiece left{PieceKind::Linear, k1.x, x0, k1.p, p0, 0, k1.y, false};
        DerivativePiece right{PieceKind::Linear, x0, k2.x, p0, k2.p, 0, k1.y + left.area(), false};
        min_slope = std::min({min_slope, left.slope(), right.slope()});
        pieces.push_back(left);
        pieces.push_back(right);
    }
    const double D = pieces.empty() ? 0 : kQuarterPi * min_slope;
    return ConvexInterpolant({knots.begin(), knots.end()}, std::move(nodes), std::move(pieces), D,
                             InterpMode::C1);
}

double solve_x_cot_x(double y) {
    // Rounding in D/slope can land a few ulps above pi/4.
    if (y > kQuarterPi && y <= kQuarterPi * (1 + 1e-12)) y = kQuarterPi;
    if (!(y >= 0) || y > kQuarterPi) throw std::invalid_argument("solve_x_cot_x: y outside [0, pi/4]");
    if (y == kQuarterPi) return kQuarterPi;
    if (y == 0) return kHalfPi;
    double lo = kQuarterPi;  // x cot x decreasing: g(lo) >= y >= g(hi)
    double hi = kHalfPi;
    double best = lo;
    double best_res = std::fabs(x_cot_x(lo) - y);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double g = x_cot_x(mid);
        const double res = std::fabs(g - y);
        if (res < best_res) {
            best = mid;
            best_res = res;
        }
        if (res <= 1e-15 || mid == lo || mid == hi) break;
        if (g > y)
            lo = mid;
        else
            hi = mid;
    }
    return best;
}

ConvexInterpolant upgrade_c2(const ConvexInterpolant& c1) {
    if (c1.mode() != InterpMode::C1) throw std::invalid_argument("upgrade_c2: interpolant is not C1");
    const double D = c1.D();
    std::vector<DerivativePiece> pieces = c1.pieces();
    for (auto& piece : pieces) {
        if (piece.padding) continue;
        if (!(piece.p_hi > piece.p_lo)) throw std::invalid_argument("upgrade_c2: degenerate piece p_hi == p_lo");
        piece.kind = PieceKind::Sinusoid;
        piece.alpha = solve_x_cot_x(D / piece.slope());
    }
    // Pieces come in (left, right) pairs per knot interval; re-anchor the
    // right piece on the sinusoid's own area.
    for (std::size_t k = 0; k + 1 < pieces.size(); k += 2) {
        if (pieces[k + 1].padding) break;
        pieces[k + 1].y_lo = pieces[k].y_lo + pieces[k].area();
    }
    return ConvexInterpolant(c1.knots(), c1.nodes(), std::move(pieces), D, InterpMode::C2);
}

ConvexInterpolant extend_right(const ConvexInterpolant& interp, double x_new_end, double curvature) {
    const double D = curvature > 0 ? curvature : interp.D();
    if (!(D > 0)) throw std::invalid_argument("extend_right: curvature floor must be positive");
    const double x_from = interp.x_end();
    if (!(x_new_end > x_from)) return interp;
    const Knot& last = interp.knots().back();
    DerivativePiece pad{PieceKind::Linear, x_from, x_new_end, last.p, last.p + D * (x_new_end - x_from),
                        0, last.y, true};
    std::vector<DerivativePiece> pieces = interp.pieces();
    pieces.push_back(pad);
    const double stored_D = interp.D() > 0 ? interp.D() : D;
    return ConvexInterpolant(interp.knots(), interp.nodes(), std::move(pieces), stored_D, interp.mode());
}

std::vector<Knot> knots_from_sequence(const ConvexSequence& seq) {
    const ConvexityReport report = validate(seq);
    if (!report.pass) throw std::invalid_argument("knots_from_sequence: sequence is not uniformly convex");
    const std::int64_t N = seq.N();
    const auto n = static_cast<std::size_t>(N);
    std::vector<Knot> knots(n);
    const auto& exact = seq.exact_values();
    if (exact) {
        const Rational inv_n2(BigInt(1), BigInt(N) * N);
        std::vector<Rational> a(n + 2);
        for (std::size_t i = 1; i <= n; ++i) a[i] = (*exact)[i - 1];
        a[0] = Rational(2) * a[1] - a[2] + inv_n2;
        a[n + 1] = Rational(2) * a[n] - a[n - 1] + inv_n2;
        const Rational half_n(BigInt(N), BigInt(2));
        for (std::size_t i = 1; i <= n; ++i) {
            knots[i - 1] = {static_cast<double>(i) / static_cast<double>(N), a[i].to_double(),
                            (half_n * (a[i + 1] - a[i - 1])).to_double()};
        }
        return knots;
    }
    const auto& v = seq.values();
    const long double inv_n2 = 1.0L / (static_cast<long double>(N) * N);
    std::vector<long double> a(n + 2);
    for (std::size_t i = 1; i <= n; ++i) a[i] = v[i - 1];
    a[0] = 2 * a[1] - a[2] + inv_n2;
    a[n + 1] = 2 * a[n] - a[n - 1] + inv_n2;
    for (std::size_t i = 1; i <= n; ++i) {
        knots[i - 1] = {static_cast<double>(i) / static_cast<double>(N), static_cast<double>(a[i]),
                        static_cast<double>(0.5L * N * (a[i + 1] - a[i - 1]))};
    }
    return knots;
}

InterpInvariants check_invariants(const ConvexInterpolant& interp, std::size_t samples) {
    InterpInvariants r;
    const auto& knots = interp.knots();
    const auto& pieces = interp.pieces();
    const bool c2 = interp.mode() == InterpMode::C2;
    double yscale = 1, pscale = 1;
    for (const auto& k : knots) {
        yscale = std::max(yscale, std::fabs(k.y));
        pscale = std::max(pscale, std::fabs(k.p));
    }

    // Area per knot pair, from the closed-form piece areas.
    std::size_t k = 0;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        double area = 0;
        while (k < pieces.size() && !pieces[k].padding && pieces[k].x_hi <= knots[i + 1].x) {
            area += pieces[k].area();
            ++k;
        }
        r.max_area_error = std::max(r.max_area_error, std::fabs(area - (knots[i + 1].y - knots[i].y)));
    }

    for (const auto& kn : knots) {
        if (pieces.empty()) break;
        const auto e = interp.eval(kn.x);
        r.max_knot_value_error = std::max(r.max_knot_value_error, std::fabs(e.f - kn.y));
        r.max_knot_slope_error = std::max(r.max_knot_slope_error, std::fabs(e.fp - kn.p));
    }

    for (std::size_t j = 0; j + 1 < pieces.size(); ++j) {
        const auto& a = pieces[j];
        const auto& b = pieces[j + 1];
        r.max_fp_jump = std::max(r.max_fp_jump, std::fabs(a.fprime(a.x_hi) - b.fprime(b.x_lo)));
        if (c2) {
            r.max_fpp_jump = std::max(r.max_fpp_jump, std::fabs(a.fsecond(a.x_hi) - b.fsecond(b.x_lo)));
        }
    }
    if (c2) {
        for (const auto& p : pieces) {
            for (double x : {p.x_lo, p.x_hi}) {
                r.max_knot_fpp_rel_error =
                    std::max(r.max_knot_fpp_rel_error, std::fabs(p.fsecond(x) - interp.D()) / interp.D());
            }
        }
    }

    r.min_fpp = std::numeric_limits<double>::infinity();
    if (!pieces.empty() && samples > 1) {
        const double a = interp.x_begin(), b = interp.x_end();
        for (std::size_t s = 0; s < samples; ++s) {
            const double x = std::min(b, a + (b - a) * static_cast<double>(s) / static_cast<double>(samples - 1));
            r.min_fpp = std::min(r.min_fpp, interp.eval(x).fpp);
        }
        r.samples = samples;
    }

    r.pass = r.max_area_error <= 1e-12 * yscale && r.max_knot_value_error <= 1e-10 * yscale &&
             r.max_knot_slope_error <= 1e-10 * pscale && r.max_fp_jump <= 1e-12 * pscale &&
             r.min_fpp > 0;
    if (c2) {
        r.pass = r.pass && r.max_fpp_jump <= 1e-9 * std::max(1.0, interp.D()) &&
                 r.max_knot_fpp_rel_error <= 1e-6 && r.min_fpp >= interp.D() * (1 - 1e-9);
    }
    return r;
}

namespace {

const char* kind_name(PieceKind k) { return k == PieceKind::Linear ? "linear" : "sinusoid"; }

}  // namespace

nlohmann::json to_json(const ConvexInterpolant& interp) {
    nlohmann::json j;
    j["mode"] = interp.mode() == InterpMode::C1 ? "C1" : "C2";
    j["D"] = interp.D();
    auto& knots = j["knots"] = nlohmann::json::array();
    for (const auto& k : interp.knots()) knots.push_back({k.x, k.y, k.p});
    auto& nodes = j["internal_nodes"] = nlohmann::json::array();
    for (const auto& n : interp.nodes()) nodes.push_back({n.x0, n.p0});
    auto& pieces = j["pieces"] = nlohmann::json::array();
    for (const auto& p : interp.pieces()) {
        pieces.push_back({{"kind", kind_name(p.kind)},
                          {"x_lo", p.x_lo},
                          {"x_hi", p.x_hi},
                          {"p_lo", p.p_lo},
                          {"p_hi", p.p_hi},
                          {"alpha", p.alpha},
                          {"y_lo", p.y_lo},
                          {"padding", p.padding}});
    }
    return j;
}

ConvexInterpolant interpolant_from_json(const nlohmann::json& j) {
    auto field = [&](const nlohmann::json& obj, const char* name) -> const nlohmann::json& {
        if (!obj.contains(name)) throw std::invalid_argument(std::string("interpolant JSON: missing field '") + name + "'");
        return obj.at(name);
    };
    std::vector<Knot> knots;
    for (const auto& k : field(j, "knots")) knots.push_back({k.at(0).get<double>(), k.at(1).get<double>(), k.at(2).get<double>()});
    std::vector<InternalNode> nodes;
    for (const auto& n : field(j, "internal_nodes")) nodes.push_back({n.at(0).get<double>(), n.at(1).get<double>()});
    std::vector<DerivativePiece> pieces;
    for (const auto& p : field(j, "pieces")) {
        DerivativePiece d;
        const auto kind = field(p, "kind").get<std::string>();
        if (kind != "linear" && kind != "sinusoid") throw std::invalid_argument("interpolant JSON: bad field 'kind'");
        d.kind = kind == "linear" ? PieceKind::Linear : PieceKind::Sinusoid;
        d.x_lo = field(p, "x_lo").get<double>();
        d.x_hi = field(p, "x_hi").get<double>();
        d.p_lo = field(p, "p_lo").get<double>();
        d.p_hi = field(p, "p_hi").get<double>();
        d.alpha = field(p, "alpha").get<double>();
        d.y_lo = field(p, "y_lo").get<double>();
        d.padding = field(p, "padding").get<bool>();
        pieces.push_back(d);
    }
    const auto mode = field(j, "mode").get<std::string>();
    if (mode != "C1" && mode != "C2") throw std::invalid_argument("interpolant JSON: bad field 'mode'");
    return ConvexInterpolant(std::move(knots), std::move(nodes), std::move(pieces), field(j, "D").get<double>(),
                             mode == "C1" ? InterpMode::C1 : InterpMode::C2);
}

}  // namespace convexsum
