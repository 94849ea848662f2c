#include "convexsum/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <limits>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace convexsum {

std::string format_long_double(long double v) {
    char buf[64];
    for (int prec = 17; prec <= 21; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*Lg", prec, v);
        if (std::strtold(buf, nullptr) == v) break;
    }
    return buf;
}

void write_sequence_csv(std::ostream& os, const ConvexSequence& seq) {
    os << "n,a_n,exact_num,exact_den\n";
    const auto& ex = seq.exact_values();
    for (std::size_t i = 0; i < seq.size(); ++i) {
        os << (i + 1) << ',' << format_long_double(seq.values()[i]) << ',';
        if (ex) os << (*ex)[i].num() << ',' << (*ex)[i].den();
        else os << ',';
        os << '\n';
    }
}

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

ConvexSequence read_sequence_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::invalid_argument("sequence CSV: empty input");
    const auto header = split(line);
    if (header.size() < 2 || header[0] != "n" || header[1] != "a_n")
        throw std::invalid_argument("sequence CSV: header must start with 'n,a_n'");
    std::vector<long double> values;
    std::vector<Rational> exact;
    bool all_exact = true;
    std::size_t row = 1;
    while (std::getline(is, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        const auto f = split(line);
        const std::string where = "sequence CSV line " + std::to_string(row);
        if (f.size() < 2) throw std::invalid_argument(where + ": expected at least fields n,a_n");
        std::size_t used = 0;
        long long n = 0;
        try {
            n = std::stoll(f[0], &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != f[0].size()) throw std::invalid_argument(where + ": field 'n' is not an integer");
        if (n != static_cast<long long>(values.size() + 1)) throw std::invalid_argument(where + ": field 'n' out of order");
        char* end = nullptr;
        const long double v = std::strtold(f[1].c_str(), &end);
        if (f[1].empty() || *end != '\0') throw std::invalid_argument(where + ": field 'a_n' is not a number");
        values.push_back(v);
        if (f.size() >= 4 && !f[2].empty() && !f[3].empty()) {
            try {
                exact.emplace_back(BigInt(f[2]), BigInt(f[3]));
            } catch (const std::exception&) {
                throw std::invalid_argument(where + ": fields 'exact_num'/'exact_den' are not integers");
            }
        } else {
            all_exact = false;
        }
    }
    if (values.empty()) throw std::invalid_argument("sequence CSV: no rows");
    SequenceMetadata meta;
    meta.construction = "csv";
    std::optional<std::vector<Rational>> ex;
    if (all_exact) {
        for (std::size_t i = 0; i < values.size(); ++i) values[i] = exact[i].to_long_double();
        ex = std::move(exact);
    }
    const auto N = static_cast<std::int64_t>(values.size());
    return ConvexSequence(N, std::move(values), std::move(ex), {}, meta);
}

ConvexSequence read_sequence_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    return read_sequence_csv(in);
}

namespace {

nlohmann::json big_to_json(const BigInt& v) {
    if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max())
        return static_cast<std::int64_t>(v);
    return v.str();
}

BigInt big_from_json(const nlohmann::json& j, const char* field) {
    if (j.is_number_integer()) return BigInt(j.get<std::int64_t>());
    if (j.is_string()) {
        try {
            return BigInt(j.get<std::string>());
        } catch (const std::exception&) {
        }
    }
    throw std::invalid_argument(std::string("hit field '") + field + "' must be an integer or a decimal string");
}

}  // namespace

nlohmann::json hits_to_json(const ConvexSequence& seq) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& h : seq.hits()) {
        arr.push_back({{"n", h.n},
                       {"alpha", static_cast<double>(h.alpha)},
                       {"num", big_to_json(h.coordinate.num())},
                       {"den", big_to_json(h.coordinate.den())}});
    }
    return arr;
}

std::vector<HitCertificate> hits_from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw std::invalid_argument("hits must be a JSON array");
    std::vector<HitCertificate> out;
    for (const auto& e : j) {
        for (const char* f : {"n", "alpha", "num", "den"}) {
            if (!e.contains(f)) throw std::invalid_argument(std::string("hit field '") + f + "' missing");
        }
        if (!e["n"].is_number_integer()) throw std::invalid_argument("hit field 'n' must be an integer");
        if (!e["alpha"].is_number()) throw std::invalid_argument("hit field 'alpha' must be a number");
        const BigInt den = big_from_json(e["den"], "den");
        if (den <= 0) throw std::invalid_argument("hit field 'den' must be positive");
        out.push_back({e["n"].get<std::int64_t>(), e["alpha"].get<long double>(), Rational(big_from_json(e["num"], "num"), den)});
    }
    return out;
}

nlohmann::json to_json(const ConvexityReport& r) {
    return {{"first_diff_min", r.first_diff_min},   {"first_diff_max", r.first_diff_max},
            {"second_diff_min", r.second_diff_min}, {"second_diff_max", r.second_diff_max},
            {"tightest_C", r.tightest_C},           {"pass", r.pass},
            {"exact", r.exact}};
}

nlohmann::json to_json(const SequenceMetadata& m) {
    return {{"construction", m.construction},
            {"alpha", static_cast<double>(m.alpha)},
            {"scale", m.scale},
            {"shear", static_cast<double>(m.shear)},
            {"knot_count", m.knot_count},
            {"trimmed_knots", m.trimmed_knots},
            {"padding_start", static_cast<double>(m.padding_start)}};
}

nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument("'" + path + "' is not valid JSON: " + e.what());
    }
}

void write_file_atomic(const std::string& path, const std::string& contents) {
    const std::filesystem::path target(path);
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
        out << contents;
        if (!out) throw std::runtime_error("write to '" + tmp.string() + "' failed");
    }
    std::filesystem::rename(tmp, target);
}

}  // namespace convexsum
