#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "skyrme/cli.hpp"
#include "skyrme/expr.hpp"

using namespace skyrme;
using cli::ojson;

TEST_CASE("expression evaluator against direct evaluation")
{
    auto e = Expr::parse("0.1*sin(theta) + x^2/3 - -ln(x)", {"theta", "x"});
    for (double th : {0.0, 0.7, 2.5})
        for (double x : {0.3, 1.0, 1.9})
            CHECK(e(th, x) == doctest::Approx(0.1 * std::sin(th) + x * x / 3 + std::log(x)).epsilon(1e-15));

    CHECK(Expr::parse("2^3^2", {})() == 512.0);
    CHECK(Expr::parse("-2^2", {})() == -4.0);
    CHECK(Expr::parse("2*-3", {})() == -6.0);
    CHECK(Expr::parse("(1+2)*3 - 4/8", {})() == 8.5);
    CHECK(Expr::parse("sqrt(exp(2)) * cos(pi) + tan(0)", {})() == doctest::Approx(-std::exp(1.0)));
    CHECK(Expr::parse(" 1.5e-1 ", {})() == 0.15);

    for (const char* bad : {"", "1+", "sin 2", "foo(1)", "(1", "1)", "y", "2 3", "sin()"})
        CHECK_THROWS_AS(Expr::parse(bad, {"x"}), ConfigError);
    CHECK_THROWS_AS(Expr::parse("x", {"x"})(1.0, 2.0), ConfigError);
}

TEST_CASE("config schema")
{
    auto c = cli::parse_config(ojson::parse(R"({"family": "spherical", "params": {"C1": 2}, "grid": {"n": 16}})"));
    CHECK(c.n == 16);
    CHECK(c.margins.size() == 3);
    CHECK(c.params["C1"] == 2);

    for (const char* bad : {R"({"family": "nope"})", R"({"family": "spinorial", "extra": 1})",
                            R"({"family": "spinorial", "params": {"C1": 1}})", R"({"family": "spinorial", "grid": {"n": 4}})",
                            R"({"family": "spinorial", "grid": {"margins": []}})", R"({"family": "spinorial", "grid": {"m": 1}})",
                            R"({"family": "spherical", "target": "s3-round"})", R"({"family": "dirac", "surface": "s2-round"})",
                            R"({"family": "identity-u1", "params": {"ax": "sin(("}})",
                            R"({"family": "identity-u1", "params": {"ax": 3}})", R"({"family": "spinorial", "target": "torus"})",
                            R"({"family": "spinorial", "surface": {"name": "s2-round", "eps": 1}})",
                            R"({"family": "spinorial", "tolerances": {"r1": 1}})", R"({"family": "spinorial", "sweep": {"grid": {"n": 3}}})",
                            R"({"family": "spinorial", "grid": {"margins": [0.1, 0.1]}})", R"([1, 2])"})
        CHECK_THROWS_AS(cli::parse_config(ojson::parse(bad)), ConfigError);
}

TEST_CASE("verify pipeline")
{
    auto c = cli::parse_config(ojson::parse(R"({"family": "spherical", "grid": {"n": 16}, "diagnostics": false})"));
    auto r = cli::run_verify(c);
    CHECK(r.runs.size() == 3);
    CHECK(r.csv_rows.size() == 3);
    CHECK(r.report["schema_version"] == cli::kSchemaVersion);
    CHECK(r.report["runs"].size() == 3);
    CHECK(r.exit_code == (r.failures.empty() ? 0 : 1));
    for (auto& run : r.runs) CHECK(std::abs(run.gap) < 0.01 * run.energy);

    auto again = cli::run_verify(c);
    CHECK(again.report.dump() == r.report.dump());

    // excluded parameters are configuration errors
    auto bad = cli::parse_config(ojson::parse(R"({"family": "spherical", "params": {"gamma": 1}, "grid": {"n": 16}})"));
    CHECK_THROWS_AS(cli::run_verify(bad), ParamInconsistent);

    // a construction failure is recorded and the run continues
    auto nr = cli::parse_config(ojson::parse(R"({"family": "identity-u1", "grid": {"n": 12, "margins": [0.3, 0.1]}, "diagnostics": false})"));
    auto rn = cli::run_verify(nr);
    CHECK(rn.exit_code == 1);
    CHECK(rn.runs.size() == 1);
    CHECK(rn.report["runs"][1].contains("error"));
}

TEST_CASE("sweeps")
{
    auto empty = cli::run_sweep(cli::parse_config(ojson::parse(R"({"family": "spinorial", "sweep": {"grid": {"params.gamma": []}}})")));
    CHECK(empty.rows.empty());
    CHECK(empty.exit_code == 0);

    auto sph = cli::run_sweep(cli::parse_config(ojson::parse(
        R"({"family": "spherical", "grid": {"n": 16, "margins": [0.05]}, "diagnostics": false, "sweep": {"grid": {"params.C1": [0.5, 1, 2]}}})")));
    CHECK(sph.rows.size() == 3);
    for (auto& row : sph.report["rows"]) CHECK(row["exit_code"] != 2);

    auto eps = cli::run_sweep(cli::parse_config(ojson::parse(
        R"({"family": "spinorial", "grid": {"n": 16, "margins": [0.1]}, "diagnostics": false,
            "sweep": {"grid": {"perturbation.epsilon": [0, 0.002, 0.004, 0.008]}}})")));
    REQUIRE(eps.rows.size() == 4);
    std::vector<double> r1;
    for (auto& row : eps.rows) {
        std::vector<std::string> f;
        std::string cell;
        std::stringstream ss(row);
        while (std::getline(ss, cell, ',')) f.push_back(cell);
        r1.push_back(std::stod(f[8]));
    }
    for (std::size_t i = 1; i < r1.size(); ++i) CHECK(r1[i] > r1[i - 1]);

    auto conv = cli::run_sweep(cli::parse_config(ojson::parse(
        R"({"family": "dirac", "grid": {"margins": [0.05]}, "diagnostics": false, "sweep": {"grid": {"grid.n": [12, 24]}}})")));
    CHECK(conv.convergence.size() == 1);

    // a bad point is recorded per row
    auto mixed = cli::run_sweep(cli::parse_config(ojson::parse(
        R"({"family": "spherical", "grid": {"n": 12, "margins": [0.05]}, "diagnostics": false, "sweep": {"grid": {"params.C1": [1, 0]}}})")));
    CHECK(mixed.rows.size() == 2);
    CHECK(mixed.report["rows"][1]["exit_code"] == 2);
}

TEST_CASE("obstruction and atomic output")
{
    for (double K : {1.0, 2.0}) {
        auto r = cli::run_obstruction(K);
        CHECK(r.contraction == doctest::Approx(K / 2).epsilon(1e-6));
        CHECK(r.def_residual < 1e-6);
        CHECK(r.pass);
    }
    CHECK_THROWS_AS(cli::run_obstruction(0.0), ConfigError);

    auto dir = std::filesystem::temp_directory_path() / "skyrme_cli_test";
    std::filesystem::remove_all(dir);
    cli::write_atomic((dir / "a" / "f.txt").string(), "hello\n");
    std::ifstream f(dir / "a" / "f.txt");
    std::string s;
    std::getline(f, s);
    CHECK(s == "hello");
    CHECK(!std::filesystem::exists(dir / "a" / "f.txt.tmp"));
    std::filesystem::remove_all(dir);
}
