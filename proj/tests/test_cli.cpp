#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "cxhyp/cli.hpp"

using namespace cxhyp;
using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

std::string temp_path(const std::string& name) {
    return std::string("/tmp/cxhyp_test_") + name;
}

} // namespace

TEST_CASE("body spec strings") {
    RunConfig cfg;
    cfg.n = 2;

    const BodySpec ball = parse_body_string("ball:0.5", cfg);
    CHECK(ball.kind == "ball");
    CHECK(ball.params.at("rho") == 0.5);

    const BodySpec cek = parse_body_string("counterexample-K:2,2", cfg);
    CHECK(cek.kind == "counterexample_K");
    CHECK(cek.params.at("a") == 2.0);

    const BodySpec nested = parse_body_string("transform(ball:0.5)", cfg);
    CHECK(nested.kind == "hyperbolic_transform");
    REQUIRE(nested.of);
    CHECK(nested.of->kind == "ball");

    const BodySpec pert = parse_body_string("perturb(ball:0.5;0.1)", cfg);
    CHECK(pert.kind == "radial_perturbation");
    CHECK(pert.params.at("epsilon") == 0.1);

    // flag fallback for parameters
    RunConfig with_flags = cfg;
    with_flags.a = 3.0;
    with_flags.b = 1.5;
    const BodySpec from_flags = parse_body_string("counterexample-K", with_flags);
    CHECK(from_flags.params.at("a") == 3.0);
    CHECK(from_flags.params.at("b") == 1.5);

    CHECK_THROWS_WITH_AS(parse_body_string("moebius:1", cfg), doctest::Contains("valid kinds"),
                         PreconditionError);
}

TEST_CASE("body spec json round trip") {
    RunConfig cfg;
    const BodySpec spec = parse_body_string("perturb(transform(ball:0.4);0.02)", cfg);
    const auto j = body_spec_to_json(spec);
    const BodySpec back = body_spec_from_json(j);
    CHECK(back.kind == spec.kind);
    CHECK(back.params.at("epsilon") == 0.02);
    REQUIRE(back.of);
    CHECK(back.of->kind == "hyperbolic_transform");
    REQUIRE(back.of->of);
    CHECK(back.of->of->params.at("rho") == 0.4);
}

TEST_CASE("grid CSV emission and bit-exact round trip") {
    std::vector<GridRow> rows;
    rows.push_back({{1.0, 0.0, 0.0, 0.0}, kPi, 1e-12});
    std::ostringstream single;
    emit_grid_csv(rows, single);
    const std::string single_text = single.str();
    // header + one row
    CHECK(std::count(single_text.begin(), single_text.end(), '\n') == 2);

    std::vector<GridRow> many;
    for (int i = 0; i < 100; ++i)
        many.push_back({{0.1 * i, 1.0 / (i + 3), std::sqrt(i + 0.5), -0.7},
                        std::exp(-0.1 * i) * kPi,
                        1e-9 / (i + 1)});
    const std::string path = temp_path("grid.csv");
    emit_grid_csv(many, path);

    std::ifstream f(path);
    REQUIRE(f.good());
    std::string header;
    std::getline(f, header);
    CHECK(header == "xi_0,xi_1,xi_2,xi_3,value,error");
    std::size_t row_count = 0;
    std::string line;
    while (std::getline(f, line)) {
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> vals;
        while (std::getline(ss, cell, ',')) vals.push_back(std::strtod(cell.c_str(), nullptr));
        REQUIRE(vals.size() == 6);
        for (int k = 0; k < 4; ++k) CHECK(vals[k] == many[row_count].xi[k]);
        CHECK(vals[4] == many[row_count].value);
        CHECK(vals[5] == many[row_count].error);
        ++row_count;
    }
    CHECK(row_count == 100);
    std::remove(path.c_str());

    CHECK_THROWS_AS(emit_grid_csv(std::vector<GridRow>{}, std::cout), PreconditionError);
    CHECK_THROWS_AS(emit_grid_csv(rows, std::string("/nonexistent-dir/x.csv")), GuardError);
}

TEST_CASE("reports are deterministic for identical configs") {
    RunConfig cfg;
    cfg.command = "pd-check";
    cfg.body = "ball:0.5";
    cfg.n = 2;
    cfg.count = 8;
    cfg.seed = 99;
    const auto r1 = build_report(cfg);
    const auto r2 = build_report(cfg);
    CHECK(r1.dump() == r2.dump());
    CHECK(r1["schema_version"] == 1);
    CHECK(r1.contains("library_version"));
    CHECK(r1["rng"]["seed"] == 99);
}

TEST_CASE("run: hvol of a ball") {
    RunConfig cfg;
    cfg.command = "hvol";
    cfg.body = "ball:0.5";
    cfg.n = 2;
    std::ostringstream out, err;
    CHECK(run(cfg, out, err) == 0);
    const json rep = json::parse(out.str());
    const double value = rep["outputs"]["hvol"]["value"];
    const double error = rep["outputs"]["hvol"]["error_estimate"];
    CHECK(std::abs(value - 32 * kPi * kPi / 9) <= error + 1e-9);
    CHECK(rep.contains("timestamp"));
}

TEST_CASE("run: pd-check on the dimension-3 witness direction") {
    RunConfig cfg;
    cfg.command = "pd-check";
    cfg.body = "counterexample-K";
    cfg.a = 2.0;
    cfg.b = 2.0;
    cfg.n = 3;
    cfg.xi = {0, 0, 0, 0, 1, 0};
    std::ostringstream out, err;
    CHECK(run(cfg, out, err) == 0);
    const json rep = json::parse(out.str());
    CHECK(rep["outputs"]["verdict"] == "negative_direction_found");
    const double min_value = rep["outputs"]["min_value"];
    CHECK(std::abs(min_value - (-16 * kPi * kPi * kPi / 9)) <= 1e-9);
    CHECK(rep["outputs"].contains("witness"));
}

TEST_CASE("run: bp-compare verdicts and exit codes") {
    RunConfig cfg;
    cfg.command = "bp-compare";
    cfg.k = "ball:0.5";
    cfg.l = "ball:0.3";
    cfg.n = 2;
    cfg.count = 6;
    std::ostringstream out, err;
    CHECK(run(cfg, out, err) == 0);
    const json rep = json::parse(out.str());
    CHECK(rep["outputs"]["verdict"] == "hypothesis_fails");
}

TEST_CASE("run: error exit codes") {
    std::ostringstream out, err;

    RunConfig unknown;
    unknown.command = "hvol";
    unknown.body = "moebius:1";
    CHECK(run(unknown, out, err) == 2);
    CHECK(err.str().find("valid kinds") != std::string::npos);

    RunConfig containment;
    containment.command = "hvol";
    containment.body = "counterexample-M:1.2,1.1"; // pokes out of the unit ball
    containment.n = 3;
    CHECK(run(containment, out, err) == 3);

    RunConfig missing;
    missing.command = "pd-check";
    CHECK(run(missing, out, err) == 2);

    RunConfig unwritable;
    unwritable.command = "hvol";
    unwritable.body = "ball:0.5";
    unwritable.out = "/nonexistent-dir/report.json";
    CHECK(run(unwritable, out, err) == 3);
}

TEST_CASE("run: csv output for a direction grid") {
    RunConfig cfg;
    cfg.command = "ft";
    cfg.body = "ball:0.5";
    cfg.n = 2;
    cfg.count = 5;
    cfg.format = "csv";
    std::ostringstream out, err;
    CHECK(run(cfg, out, err) == 0);
    const std::string text = out.str();
    CHECK(std::count(text.begin(), text.end(), '\n') == 6); // header + 5 rows
    CHECK(text.rfind("xi_0,", 0) == 0);
}

TEST_CASE("run: config file bodies and counterexample command") {
    const std::string path = temp_path("config.json");
    {
        std::ofstream f(path);
        f << R"({"bodies": {"myK": {"kind": "counterexample_K", "a": 2, "b": 2}}})";
    }
    RunConfig cfg;
    cfg.command = "hvol";
    cfg.body = "@myK";
    cfg.config_path = path;
    cfg.n = 3;
    cfg.level = 8;
    std::ostringstream out, err;
    CHECK(run(cfg, out, err) == 0);
    const json rep = json::parse(out.str());
    CHECK(rep["outputs"]["body"].get<std::string>().find("counterexample-K") !=
          std::string::npos);
    std::remove(path.c_str());

    RunConfig ce;
    ce.command = "counterexample";
    ce.samples = 50'000;
    std::ostringstream out2, err2;
    CHECK(run(ce, out2, err2) == 0);
    const json rep2 = json::parse(out2.str());
    const double ft = rep2["outputs"]["ft"]["value"];
    const double expected = rep2["outputs"]["ft_expected"];
    CHECK(std::abs(ft - expected) <= 1e-9);
    CHECK(rep2["outputs"]["pd_verdict"] == "negative_direction_found");
}

#ifdef CXHYP_BIN
TEST_CASE("spawned binary end-to-end") {
    const std::string out_path = temp_path("spawn.json");
    const std::string cmd = std::string(CXHYP_BIN) +
                            " hvol --body ball:0.5 --n 2 --out " + out_path +
                            " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    CHECK(WEXITSTATUS(status) == 0);
    std::ifstream f(out_path);
    REQUIRE(f.good());
    const json rep = json::parse(f);
    CHECK(std::abs(rep["outputs"]["hvol"]["value"].get<double>() - 32 * kPi * kPi / 9) <= 1e-8);
    std::remove(out_path.c_str());

    const std::string bad = std::string(CXHYP_BIN) + " hvol --body moebius:1 > /dev/null 2>&1";
    const int bad_status = std::system(bad.c_str());
    REQUIRE(bad_status != -1);
    CHECK(WEXITSTATUS(bad_status) == 2);
}
#endif
