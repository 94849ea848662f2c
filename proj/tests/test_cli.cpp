#include "cli.hpp"

#include "convexsum/io.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace convexsum;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "convexsum");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "convexsum_cli_tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("construct writes the sequence CSV and the hits") {
    const auto csv = scratch("s4096.csv");
    const Result r = run({"construct", "--N", "4096", "--alpha", "1", "--format", "csv", "--out", csv.string()});
    REQUIRE(r.code == 0);
    const ConvexSequence seq = read_sequence_csv_file(csv.string());
    CHECK(seq.N() == 4096);
    const auto hits = hits_from_json(read_json_file(csv.string() + ".hits.json"));
    const auto summary = nlohmann::json::parse(r.out);
    CHECK(hits.size() == summary["hit_count"].get<std::size_t>());
    CHECK(summary["version"] == cli::kVersion);
    CHECK(summary["config"]["command"] == "construct");
    for (const auto& h : hits) {
        CHECK(h.is_lattice_member());
        CHECK(seq.at(h.n) * 4096 == doctest::Approx(static_cast<double>(h.coordinate.num())).epsilon(1e-15));
    }
}

TEST_CASE("validate exits 2 on an arithmetic progression") {
    const auto csv = scratch("ap.csv");
    {
        std::ofstream out(csv);
        out << "n,a_n,exact_num,exact_den\n";
        for (int n = 1; n <= 10; ++n) out << n << ',' << n / 10.0 << ',' << n << ",10\n";
    }
    const Result r = run({"validate", "--in", csv.string()});
    CHECK(r.code == 2);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["report"]["pass"] == false);
    CHECK(doc["report"]["second_diff_max"].get<double>() < 0.25);
}

TEST_CASE("experiment reports are byte-identical across runs and thread counts") {
    const Result a = run({"experiment", "A", "--N", "64", "--seed", "7"});
    const Result b = run({"experiment", "A", "--N", "64", "--seed", "7", "--threads", "2"});
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    const auto doc = nlohmann::json::parse(a.out);
    CHECK(doc["report"]["identity"]["pass"] == true);
    CHECK(doc["config"]["seed"] == 7);
    CHECK_FALSE(doc["config"].contains("threads"));
}

TEST_CASE("errors and exit codes") {
    CHECK(run({"construct", "--N", "64", "--alpha", "1", "--bogus"}).code == 1);
    CHECK(run({}).code == 1);
    CHECK(run({"construct", "--N", "64", "--alpha", "0.5x"}).code == 1);
    CHECK(run({"experiment", "Q", "--N", "64"}).code == 1);

    const auto spec = scratch("bad_spec.json");
    {
        std::ofstream out(spec);
        out << R"({"N": 3, "eta": [0, 0], "b": [1, 1, 1]})";
    }
    const Result r = run({"expsum", "--spec", spec.string()});
    CHECK(r.code == 1);
    CHECK(r.err.find("'eta'") != std::string::npos);
}

TEST_CASE("farey, scan, regress and interp subcommands") {
    const Result f = run({"farey", "--lo", "1/3", "--hi", "2/3", "--qmax", "3"});
    REQUIRE(f.code == 0);
    CHECK(nlohmann::json::parse(f.out)["fractions"] == nlohmann::json{"1/3", "1/2", "2/3"});

    const Result s = run({"scan", "--N", "256,1024,4096", "--alpha", "2"});
    REQUIRE(s.code == 0);
    const auto sj = nlohmann::json::parse(s.out);
    CHECK(std::fabs(sj["results"][0]["fit"]["slope"].get<double>() - 1.0) <= 0.15);

    const Result g = run({"regress", "--points", "10:1,100:10,1000:100"});
    REQUIRE(g.code == 0);
    CHECK(nlohmann::json::parse(g.out)["regression"]["slope"].get<double>() == doctest::Approx(1.0));

    const auto knots = scratch("knots.json");
    {
        std::ofstream out(knots);
        out << "[[0, 0, 0], [1, 0.3333333333333333, 1], [2, 1.5, 1.4]]";
    }
    const Result i = run({"interp", "--knots", knots.string(), "--dump"});
    REQUIRE(i.code == 0);
    const auto ij = nlohmann::json::parse(i.out);
    CHECK(ij["invariants"]["pass"] == true);
    CHECK(ij["interpolant"]["mode"] == "C2");
}

TEST_CASE("expsum on a spec file") {
    const auto spec = scratch("spec.json");
    {
        std::ofstream out(spec);
        out << R"({"N": 4, "eta": [0, 0, 0, 0], "b": [1, 1, 1, 1]})";
    }
    const Result r = run({"expsum", "--spec", spec.string(), "--Mx", "4", "--Mt", "2", "--t-hi", "1", "--levels",
                          "--fast-path", "on"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["norm"]["kernel"] == "fft");
    CHECK(j["levels"]["observed_max"].get<double>() == doctest::Approx(4.0));
}

TEST_CASE("sequence CSV round trip keeps exact values") {
    std::ostringstream os;
    std::vector<Rational> ex;
    std::vector<long double> v;
    for (int n = 1; n <= 5; ++n) {
        ex.emplace_back(BigInt(n * n), BigInt(7));
        v.push_back(ex.back().to_long_double());
    }
    write_sequence_csv(os, ConvexSequence(5, v, ex));
    std::istringstream is(os.str());
    const ConvexSequence back = read_sequence_csv(is);
    REQUIRE(back.exact_values());
    CHECK(*back.exact_values() == ex);
    CHECK(back.values() == v);

    std::istringstream bad("n,a_n\n1,0.5\n3,0.7\n");
    CHECK_THROWS_WITH_AS(read_sequence_csv(bad), doctest::Contains("'n'"), std::invalid_argument);
}

}
