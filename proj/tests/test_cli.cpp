#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "casimir/error.hpp"
#include "casimir/rect_piston.hpp"
#include "casimir/thermal.hpp"
#include "cli.hpp"

using namespace casimir;
using namespace casimir::cli;

namespace {

struct Out {
    int code;
    std::string out, err;
};

Out call(const std::vector<std::string>& args) {
    std::ostringstream o, e;
    const int code = run(args, o, e);
    return {code, o.str(), e.str()};
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::istringstream ls(line);
        for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
        rows.push_back(cells);
    }
    return rows;
}

int column(const std::vector<std::string>& header, const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name || header[i].rfind(name + "[", 0) == 0) return int(i);
    return -1;
}

const std::string shapes = std::string(CASIMIR_SOURCE_DIR) + "/shapes/";

}  // namespace

TEST_CASE("sweep spec") {
    const auto lin = SweepSpec::parse("a", "0.5:2:4");
    REQUIRE(lin.values().size() == 4);
    CHECK(lin.values()[1] == doctest::Approx(1.0));
    CHECK(lin.values().back() == 2.0);
    const auto lg = SweepSpec::parse("a", "0.01:1:3:log");
    CHECK(lg.values()[1] == doctest::Approx(0.1));
    CHECK(lg.values().front() == 0.01);
    CHECK_THROWS_AS(SweepSpec::parse("a", "1:1:4"), DomainError);
    CHECK_THROWS_AS(SweepSpec::parse("a", "2:1:4"), DomainError);
    CHECK_THROWS_AS(SweepSpec::parse("a", "0:1:4:log"), DomainError);
    CHECK_THROWS_AS(SweepSpec::parse("a", "0.1:1:1"), DomainError);
    CHECK_THROWS_AS(SweepSpec::parse("a", "0.1:1:2.5"), DomainError);
    CHECK_THROWS_AS(SweepSpec::parse("a", "0.1:1"), DomainError);
    CHECK_THROWS_AS(SweepSpec::parse("a", "0.1:1:5:cubic"), DomainError);
}

TEST_CASE("number formatting and units") {
    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(format_number(1.0) == "1");
    CHECK(format_number(INFINITY) == "inf");
    CHECK(format_number(-INFINITY) == "-inf");
    CHECK(format_number(NAN) == "nan");
    CHECK(unit_of("force") == "1/L^2");
    CHECK(unit_of("perimeter") == "1/L^2");
    CHECK(unit_of("boundary_length") == "L");
    CHECK(unit_of("normalized_box") == "1");
    CHECK(unit_of("representation").empty());

    Record r;
    r.add("name", std::string("x,\"y\""));
    r.add("a", 0.5);
    std::ostringstream csv, js;
    write_csv({r}, csv);
    CHECK(csv.str().find("\"x,\"\"y\"\"\",0.5") != std::string::npos);
    write_json({r}, js);
    const auto j = nlohmann::json::parse(js.str());
    CHECK(j[0]["name"] == "x,\"y\"");
    std::ostringstream empty;
    write_json({}, empty);
    CHECK(nlohmann::json::parse(empty.str()).empty());
}

TEST_CASE("force: single record and json round trip") {
    const Out o = call({"force", "--field", "dirichlet", "--a", "0.1", "--b", "1", "--c", "1", "--format", "json"});
    REQUIRE(o.code == 0);
    const auto j = nlohmann::json::parse(o.out);
    REQUIRE(j.size() == 1);
    const ForceResult fr = force_scalar({0.1, 1, 1}, Field::Dirichlet);
    CHECK(j[0]["a"].get<double>() == 0.1);
    CHECK(j[0]["force"].get<double>() == fr.total);
    CHECK(j[0]["edge"].get<double>() == fr.terms.at("edge"));
    CHECK(j[0]["h"] == "inf");
    CHECK(j[0]["series_bound"].get<double>() <= 1e-12 * std::fabs(fr.total));

    // every double survives the text form exactly
    const Out sweep = call({"force", "--field", "em", "--sweep", "a", "0.05:4:37:log", "--format", "json"});
    REQUIRE(sweep.code == 0);
    const auto js = nlohmann::json::parse(sweep.out);
    REQUIRE(js.size() == 37);
    const auto values = SweepSpec::parse("a", "0.05:4:37:log").values();
    for (std::size_t i = 0; i < js.size(); ++i) {
        CHECK(js[i]["index"].get<int>() == int(i));
        CHECK(js[i]["a"].get<double>() == values[i]);
        CHECK(js[i]["force"].get<double>() == force_em({values[i], 1, 1}).total);
    }
}

TEST_CASE("force: normalizations and term columns") {
    const Out o = call({"force", "--field", "em", "--sweep", "a", "0.05:4:100", "--normalize", "parallel"});
    REQUIRE(o.code == 0);
    const auto rows = csv_rows(o.out);
    REQUIRE(rows.size() == 101);
    const int n = column(rows[0], "normalized");
    REQUIRE(n >= 0);
    CHECK(std::stod(rows[1][n]) == doctest::Approx(1.0).epsilon(0.05));
    CHECK(std::fabs(std::stod(rows[100][n])) < 0.01);

    const auto j = nlohmann::json::parse(
        call({"force", "--a", "0.2", "--normalize", "F_prime", "--format", "json"}).out)[0];
    const double A = 1.0, z4 = std::pow(M_PI, 4) / 90;
    CHECK(j["normalized"].get<double>() == doctest::Approx(8 * M_PI * M_PI * A * j["force"].get<double>() / (3 * z4)));
    CHECK(j["normalized_power_terms"].get<double>() ==
          doctest::Approx((j["parallel_plate"].get<double>() + j["edge"].get<double>() +
                           j["perimeter"].get<double>() + j["one_dim_EM"].get<double>()) *
                          8 * M_PI * M_PI / (3 * z4)));
    CHECK(j["force_box"].get<double>() ==
          doctest::Approx(j["force"].get<double>() - j["region_II_J"].get<double>()));
    const auto d = nlohmann::json::parse(
        call({"force", "--field", "dirichlet", "--a", "0.2", "--normalize", "fprime", "--format", "json"}).out)[0];
    CHECK(d["normalized"].get<double>() == doctest::Approx(16 * M_PI * M_PI * d["force"].get<double>() / (3 * z4)));
}

TEST_CASE("force: Neumann box changes sign near a/b = 1.745") {
    const Out o = call({"force", "--field", "neumann", "--box", "--b", "1", "--c", "1", "--sweep", "a", "0.1:4:80"});
    REQUIRE(o.code == 0);
    const auto rows = csv_rows(o.out);
    const int ia = column(rows[0], "a"), f = column(rows[0], "force");
    int crossings = 0;
    double at = 0;
    for (std::size_t i = 2; i < rows.size(); ++i) {
        const double f0 = std::stod(rows[i - 1][f]), f1 = std::stod(rows[i][f]);
        if ((f0 < 0) != (f1 < 0)) {
            ++crossings;
            const double a0 = std::stod(rows[i - 1][ia]), a1 = std::stod(rows[i][ia]);
            at = a0 - f0 * (a1 - a0) / (f1 - f0);
        }
    }
    CHECK(crossings == 1);
    CHECK(at == doctest::Approx(1.745).epsilon(0.005));
}

TEST_CASE("force: finite h and representation") {
    const Out o = call({"force", "--field", "neumann", "--a", "0.5", "--h", "3", "--format", "json"});
    REQUIRE(o.code == 0);
    const auto j = nlohmann::json::parse(o.out)[0];
    CHECK(j["force"].get<double>() == force_finite_h({0.5, 1, 1, 3}, Field::Neumann).total);
    CHECK(j.contains("region_I"));
    const auto m = nlohmann::json::parse(
        call({"force", "--a", "0.7", "--representation", "modes", "--format", "json"}).out)[0];
    const auto c = nlohmann::json::parse(
        call({"force", "--a", "0.7", "--representation", "closed", "--format", "json"}).out)[0];
    CHECK(m["representation"] == "modes");
    CHECK(c["representation"] == "closed");
    CHECK(m["force"].get<double>() == doctest::Approx(c["force"].get<double>()).epsilon(1e-10));
}

TEST_CASE("thermal subcommand") {
    const Out o = call({"thermal", "--field", "em", "--b", "1", "--c", "1", "--h", "50", "--a", "0.01", "--sweep",
                        "beta_over_b", "0.2:10:120", "--normalize", "sb", "--asymptote", "low-temp"});
    REQUIRE(o.code == 0);
    const auto rows = csv_rows(o.out);
    REQUIRE(rows.size() == 121);
    const int n = column(rows[0], "normalized"), na = column(rows[0], "normalized_asymptote");
    const int fe = column(rows[0], "free_energy");
    CHECK(fe >= 0);
    CHECK(std::stod(rows[1][n]) == doctest::Approx(1.0).epsilon(0.1));
    // normalized curve falls monotonically; asymptote approaches it at the cold end
    for (std::size_t i = 2; i < rows.size(); ++i) CHECK(std::stod(rows[i][n]) < std::stod(rows[i - 1][n]));
    CHECK(std::stod(rows[120][na]) / std::stod(rows[120][n]) == doctest::Approx(1.0).epsilon(0.02));

    const auto cold = nlohmann::json::parse(
        call({"thermal", "--field", "dirichlet", "--beta", "1e9", "--normalize", "sb", "--format", "json"}).out)[0];
    CHECK(std::fabs(cold["normalized"].get<double>()) < 1e-6);

    const auto j = nlohmann::json::parse(
        call({"thermal", "--field", "dirichlet", "--beta", "0.7", "--a", "0.1", "--format", "json"}).out)[0];
    CHECK(j["force"].get<double>() == thermal_force({0.1, 1, 1}, {0.7}, Field::Dirichlet).value);

    CHECK(call({"thermal", "--field", "em"}).code == 1);
    CHECK(call({"thermal", "--beta", "-1"}).code == 1);
    CHECK(call({"thermal", "--field", "neumann", "--beta", "5", "--asymptote", "low-temp"}).code == 1);
}

TEST_CASE("oracle subcommand") {
    const Out o = call({"oracle", "--field", "dirichlet", "--a", "1", "--format", "json"});
    REQUIRE(o.code == 0);
    const auto j = nlohmann::json::parse(o.out)[0];
    CHECK(j["c4_ratio"].get<double>() == doctest::Approx(1.0).epsilon(0.01));
    CHECK(std::fabs(j["rel_delta"].get<double>()) < 1e-4);

    const auto t = nlohmann::json::parse(call({"oracle", "--mode", "thermal", "--field", "em", "--a", "0.05", "--h",
                                               "20", "--beta", "1", "--format", "json"})
                                             .out)[0];
    CHECK(std::fabs(t["rel_delta"].get<double>()) < 1e-3);

    const std::string dump = (std::filesystem::temp_directory_path() / "casimir_cli_spectrum.txt").string();
    CHECK(call({"oracle", "--a", "1", "--kmax", "40", "--dump-spectrum", dump}).code == 0);
    std::ifstream in(dump);
    double omega = 0;
    long long mult = 0;
    in >> omega >> mult;
    CHECK(omega == doctest::Approx(M_PI * std::sqrt(3.0)));
    CHECK(mult == 1);

    CHECK(call({"oracle", "--a", "1", "--kmax", "-3"}).code == 1);
    CHECK(call({"oracle", "--a", "1", "--kmax", "1e6"}).code == 2);
    CHECK(call({"oracle", "--a", "1", "--points", "4"}).code == 2);
    CHECK(call({"oracle", "--mode", "force", "--a", "1"}).code == 1);
    CHECK(call({"oracle", "--mode", "thermal", "--a", "1", "--h", "3"}).code == 1);
}

TEST_CASE("shape subcommand") {
    auto chi_of = [](const std::string& file) {
        const Out o = call({"shape", shapes + file, "--format", "json"});
        REQUIRE(o.code == 0);
        return nlohmann::json::parse(o.out)[0]["chi"].get<double>();
    };
    CHECK(chi_of("square.txt") == doctest::Approx(0.25));
    CHECK(chi_of("circle.json") == doctest::Approx(1.0 / 6));
    CHECK(chi_of("hexagon.txt") == doctest::Approx(5.0 / 24));
    CHECK(chi_of("rounded_square.txt") == doctest::Approx(1.0 / 6));

    const Out o = call({"shape", "--file", shapes + "square.txt", "--a", "0.01", "0.1", "--format", "json"});
    REQUIRE(o.code == 0);
    const auto j = nlohmann::json::parse(o.out);
    REQUIRE(j.size() == 2);
    CHECK(j[1]["a"].get<double>() == 0.1);
    CHECK(j[1]["force"].get<double>() == doctest::Approx(force_em({0.1, 1, 1}).total - force_em({0.1, 1, 1}).terms.at("region_II_J") -
                                                         force_em({0.1, 1, 1}).terms.at("exp_series")));

    const std::string bad_path = (std::filesystem::temp_directory_path() / "casimir_cli_bad_shape.txt").string();
    {
        std::ofstream bad(bad_path);
        bad << "area 1\nperimeter 4\ncorner 90\ncorner xx\n";
    }
    const Out b = call({"shape", bad_path});
    CHECK(b.code == 1);
    CHECK(b.err.find("line 4") != std::string::npos);
    CHECK(call({"shape", "/nonexistent.txt"}).code == 1);
}

TEST_CASE("input errors and help") {
    for (const auto& args : std::vector<std::vector<std::string>>{
             {},
             {"force"},
             {"force", "--a", "-1"},
             {"force", "--a", "x"},
             {"force", "--a", "1", "--bogus"},
             {"force", "--a", "1", "--field", "scalar"},
             {"force", "--a", "1", "--h", "3", "--box"},
             {"force", "--sweep", "beta", "0.1:1:3"},
             {"force", "--sweep", "a", "1:0:3"},
             {"force", "--a", "1", "--format", "xml"},
             {"force", "--a", "1", "--rel-tol", "0"},
             {"bogus"}}) {
        CAPTURE(args.size());
        const Out o = call(args);
        CHECK(o.code == 1);
        CHECK(o.out.empty());
        CHECK(std::count(o.err.begin(), o.err.end(), '\n') == 1);
    }
    const Out h = call({"--help"});
    CHECK(h.code == 0);
    CHECK(h.out.find("thermal") != std::string::npos);
    CHECK(call({"force", "--help"}).code == 0);
}

TEST_CASE("deterministic across thread counts") {
    const std::vector<std::string> args = {"force", "--field", "dirichlet", "--sweep", "a", "0.05:3:41", "--normalize",
                                           "parallel"};
    setenv("CASIMIR_THREADS", "1", 1);
    const Out one = call(args);
    setenv("CASIMIR_THREADS", "4", 1);
    const Out four = call(args);
    const Out again = call(args);
    unsetenv("CASIMIR_THREADS");
    CHECK(one.out == four.out);
    CHECK(four.out == again.out);
    CHECK(one.out.rfind("# units:", 0) == 0);
}
