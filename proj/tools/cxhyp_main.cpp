#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cxhyp/cli.hpp"

namespace {

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(std::stod(item));
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "cxhyp — volumes, complex-hyperplane sections, spherical Radon/Fourier "
        "transforms and positive-definiteness analysis for rotation-invariant star "
        "bodies in the complex-hyperbolic unit ball"};
    app.get_formatter()->column_width(34);

    cxhyp::RunConfig cfg;
    std::string body_str, k_str, l_str, config_str, out_str, xi_str, u_str, axes_str;
    double rho = 0.0, a = 0.0, b = 0.0, epsilon = 0.0;
    bool no_richardson = false;

    app.add_option("command", cfg.command,
                   "hvol | section | radon | ft | pd-check | bp-compare | counterexample | "
                   "solution-table | selftest")
        ->required();
    auto* o_body = app.add_option("--body", body_str, "body spec, e.g. ball:0.5 or @label");
    auto* o_k = app.add_option("--k", k_str, "first body for bp-compare");
    auto* o_l = app.add_option("--l", l_str, "second body for bp-compare");
    auto* o_config = app.add_option("--config", config_str, "JSON config file");
    auto* o_out = app.add_option("--out", out_str, "output path (default: stdout)");
    auto* o_format = app.add_option("--format", cfg.format, "json | csv");
    auto* o_n = app.add_option("--n", cfg.n, "complex dimension");
    auto* o_level = app.add_option("--level", cfg.level, "quadrature level (0 = default)");
    auto* o_samples = app.add_option("--samples", cfg.samples, "Monte Carlo sample budget");
    auto* o_seed = app.add_option("--seed", cfg.seed, "RNG seed (recorded in the report)");
    auto* o_count = app.add_option("--count", cfg.count, "grid size");
    auto* o_grid = app.add_option("--grid", cfg.grid, "orbit-reduced | uniform");
    auto* o_method = app.add_option("--method", cfg.method, "auto | analytic | montecarlo");
    auto* o_h = app.add_option("--fd-step", cfg.h, "finite-difference step");
    app.add_flag("--no-richardson", no_richardson, "disable Richardson extrapolation");
    auto* o_power = app.add_option("--power", cfg.power, "exponent for radon of rho^p");
    app.add_option("--xi", xi_str, "explicit direction, 2n comma-separated entries");
    app.add_option("--u", u_str, "section offset u1,u2");
    auto* o_rho = app.add_option("--rho", rho, "ball radius");
    auto* o_a = app.add_option("--a", a, "counterexample parameter a");
    auto* o_b = app.add_option("--b", b, "counterexample parameter b");
    auto* o_eps = app.add_option("--epsilon", epsilon, "radial perturbation size");
    app.add_option("--axes", axes_str, "ellipsoid semi-axes, comma-separated");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (o_body->count()) cfg.body = body_str;
    if (o_k->count()) cfg.k = k_str;
    if (o_l->count()) cfg.l = l_str;
    if (o_config->count()) cfg.config_path = config_str;
    if (o_out->count()) cfg.out = out_str;
    if (o_rho->count()) cfg.rho = rho;
    if (o_a->count()) cfg.a = a;
    if (o_b->count()) cfg.b = b;
    if (o_eps->count()) cfg.epsilon = epsilon;
    if (!axes_str.empty()) cfg.axes = parse_list(axes_str);
    if (!xi_str.empty()) cfg.xi = parse_list(xi_str);
    if (!u_str.empty()) {
        const auto u = parse_list(u_str);
        if (u.size() != 2) {
            std::cerr << "error: --u expects two comma-separated values\n";
            return 2;
        }
        cfg.u = {u[0], u[1]};
        cfg.has_u = true;
    }
    cfg.richardson = !no_richardson;

    // Config-file defaults apply wherever the flag was not given on the
    // command line; flags win.
    if (cfg.config_path) {
        std::ifstream f(*cfg.config_path);
        if (!f) {
            std::cerr << "error: cannot read config file '" << *cfg.config_path << "'\n";
            return 2;
        }
        nlohmann::json doc;
        try {
            f >> doc;
        } catch (const std::exception& e) {
            std::cerr << "error: config file parse error: " << e.what() << "\n";
            return 2;
        }
        if (doc.contains("defaults")) {
            const auto& d = doc["defaults"];
            auto apply = [&](const CLI::Option* opt, const char* key, auto& field) {
                using T = std::remove_reference_t<decltype(field)>;
                if (!opt->count() && d.contains(key)) field = d[key].get<T>();
            };
            apply(o_n, "n", cfg.n);
            apply(o_level, "level", cfg.level);
            apply(o_samples, "samples", cfg.samples);
            apply(o_seed, "seed", cfg.seed);
            apply(o_count, "count", cfg.count);
            apply(o_format, "format", cfg.format);
            apply(o_grid, "grid", cfg.grid);
            apply(o_method, "method", cfg.method);
            apply(o_h, "h", cfg.h);
            apply(o_power, "power", cfg.power);
        }
    }

    return cxhyp::run(cfg, std::cout, std::cerr);
}
