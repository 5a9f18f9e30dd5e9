#pragma once

// Command-line front end: config ingestion, report emission, exit-code
// policy. Reports are JSON (schema_version 1) or CSV; identical configs
// (including seeds) produce byte-identical reports modulo the timestamp.
// Exit codes: 0 success, 2 precondition errors, 3 numerical-guard errors.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cxhyp/bodies.hpp"

namespace cxhyp {

struct RunConfig {
    std::string command; // hvol | section | radon | ft | pd-check | bp-compare |
                         // counterexample | solution-table | selftest
    std::optional<std::string> body, k, l; // body spec strings or @label into config
    std::optional<std::string> config_path;
    std::optional<std::string> out;
    std::string format = "json"; // json | csv

    int n = 2;
    int level = 0; // 0 -> per-dimension default
    std::size_t samples = 200'000;
    std::uint64_t seed = 1;

    std::vector<double> xi;           // explicit direction (2n entries)
    std::size_t count = 16;           // grid size when no explicit direction
    std::string grid = "orbit-reduced"; // orbit-reduced | uniform

    std::array<double, 2> u{0.0, 0.0};
    bool has_u = false;
    std::string method = "auto"; // auto | analytic | montecarlo
    double h = 1e-2;
    bool richardson = true;
    double power = 2.0; // exponent for the radon command's rho^power

    // per-kind parameter flags (used when a body string has no inline params)
    std::optional<double> rho, a, b, epsilon;
    std::vector<double> axes;
};

// "kind:param,param" strings, wrappers transform(...) and perturb(...;eps),
// and @label references into the config document.
BodySpec parse_body_string(const std::string& text, const RunConfig& cfg);

BodySpec body_spec_from_json(const nlohmann::json& j);
nlohmann::ordered_json body_spec_to_json(const BodySpec& spec);

struct GridRow {
    std::vector<double> xi; // may be empty for scalar results
    double value = 0.0;
    double error = 0.0;
};

// CSV with header xi_0..xi_{d-1},value,error; 17 significant digits, so a
// round-trip parse reproduces the doubles bit-exactly.
void emit_grid_csv(const std::vector<GridRow>& results, std::ostream& os);
void emit_grid_csv(const std::vector<GridRow>& results, const std::string& path);

// Report body without the timestamp (deterministic for a fixed config).
nlohmann::ordered_json build_report(const RunConfig& cfg);

// Executes the command, writes the report to cfg.out or `out`, reports
// errors on `err`; returns the process exit code.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

} // namespace cxhyp
