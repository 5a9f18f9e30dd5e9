#include "cxhyp/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "cxhyp/bp_analysis.hpp"
#include "cxhyp/hyperbolic_volume.hpp"
#include "cxhyp/rng.hpp"
#include "cxhyp/selftest.hpp"
#include "cxhyp/transforms.hpp"
#include "cxhyp/version.hpp"

namespace cxhyp {

namespace {

using ojson = nlohmann::ordered_json;
constexpr double kPi = std::numbers::pi;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string canonical_kind(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return c == '-' ? '_' : std::tolower(c); });
    if (s == "counterexample_k" || s == "cek") return "counterexample_K";
    if (s == "counterexample_m" || s == "cem") return "counterexample_M";
    if (s == "ellipsoid") return "complex_ellipsoid";
    if (s == "transform") return "hyperbolic_transform";
    if (s == "perturb") return "radial_perturbation";
    return s;
}

std::vector<double> parse_csv_doubles(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t pos = 0;
        const double v = std::stod(item, &pos);
        out.push_back(v);
    }
    return out;
}

} // namespace

BodySpec parse_body_string(const std::string& text, const RunConfig& cfg) {
    std::string s = text;
    s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }),
            s.end());
    if (s.empty()) throw PreconditionError("empty body spec");

    auto wrapped = [&](const char* prefix) -> std::optional<std::string> {
        const std::string pre = std::string(prefix) + "(";
        if (s.rfind(pre, 0) == 0 && s.back() == ')')
            return s.substr(pre.size(), s.size() - pre.size() - 1);
        return std::nullopt;
    };

    if (auto inner = wrapped("transform"); inner || (inner = wrapped("hyperbolic_transform"))) {
        auto spec = BodySpec{};
        spec.kind = "hyperbolic_transform";
        std::string body_part = *inner;
        if (const auto semi = body_part.rfind(';'); semi != std::string::npos) {
            spec.params["delta"] = std::stod(body_part.substr(semi + 1));
            body_part = body_part.substr(0, semi);
        }
        spec.of = std::make_shared<BodySpec>(parse_body_string(body_part, cfg));
        return spec;
    }
    if (auto inner = wrapped("perturb"); inner || (inner = wrapped("radial_perturbation"))) {
        auto spec = BodySpec{};
        spec.kind = "radial_perturbation";
        std::string body_part = *inner;
        if (const auto semi = body_part.rfind(';'); semi != std::string::npos) {
            spec.params["epsilon"] = std::stod(body_part.substr(semi + 1));
            body_part = body_part.substr(0, semi);
        } else if (cfg.epsilon) {
            spec.params["epsilon"] = *cfg.epsilon;
        } else {
            throw PreconditionError("perturb(...) needs an epsilon: perturb(body;eps)");
        }
        spec.of = std::make_shared<BodySpec>(parse_body_string(body_part, cfg));
        return spec;
    }

    std::string kind = s;
    std::vector<double> params;
    if (const auto colon = s.find(':'); colon != std::string::npos) {
        kind = s.substr(0, colon);
        params = parse_csv_doubles(s.substr(colon + 1));
    }
    kind = canonical_kind(kind);

    BodySpec spec;
    spec.kind = kind;
    if (kind == "ball") {
        double rho = params.size() > 0 ? params[0] : cfg.rho.value_or(0.5);
        spec.params = {{"rho", rho}, {"n", static_cast<double>(cfg.n)}};
        if (params.size() > 1) spec.params["n"] = params[1];
    } else if (kind == "complex_ellipsoid") {
        std::vector<double> axes = !params.empty() ? params : cfg.axes;
        if (axes.empty())
            throw PreconditionError("complex_ellipsoid needs axes: complex-ellipsoid:a1,a2[,a3]");
        for (std::size_t i = 0; i < axes.size(); ++i)
            spec.params["a" + std::to_string(i + 1)] = axes[i];
    } else if (kind == "counterexample_K" || kind == "counterexample_M") {
        spec.params["a"] = params.size() > 0 ? params[0] : cfg.a.value_or(2.0);
        spec.params["b"] = params.size() > 1 ? params[1] : cfg.b.value_or(2.0);
    } else {
        std::ostringstream msg;
        msg << "unknown body kind '" << kind << "'; valid kinds:";
        for (const auto& k : known_body_kinds()) msg << " " << k;
        throw PreconditionError(msg.str());
    }
    return spec;
}

BodySpec body_spec_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw PreconditionError("body spec document must be an object with a 'kind' field");
    BodySpec spec;
    spec.kind = canonical_kind(j.at("kind").get<std::string>());
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (it.key() == "kind" || it.key() == "of") continue;
        if (it.value().is_number())
            spec.params[it.key()] = it.value().get<double>();
    }
    if (j.contains("of")) spec.of = std::make_shared<BodySpec>(body_spec_from_json(j.at("of")));
    return spec;
}

ojson body_spec_to_json(const BodySpec& spec) {
    ojson j;
    j["kind"] = spec.kind;
    for (const auto& [key, value] : spec.params) j[key] = value;
    if (spec.of) j["of"] = body_spec_to_json(*spec.of);
    return j;
}

void emit_grid_csv(const std::vector<GridRow>& results, std::ostream& os) {
    if (results.empty()) throw PreconditionError("emit_grid_csv: empty result set");
    const std::size_t d = results.front().xi.size();
    for (std::size_t i = 0; i < d; ++i) os << "xi_" << i << ",";
    os << "value,error\n";
    for (const auto& row : results) {
        if (row.xi.size() != d)
            throw PreconditionError("emit_grid_csv: inconsistent direction dimensions");
        for (const double x : row.xi) os << fmt17(x) << ",";
        os << fmt17(row.value) << "," << fmt17(row.error) << "\n";
    }
}

void emit_grid_csv(const std::vector<GridRow>& results, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw GuardError("emit_grid_csv: cannot write '" + path + "'");
    emit_grid_csv(results, f);
    f.flush();
    if (!f) throw GuardError("emit_grid_csv: write failed for '" + path + "'");
}

namespace {

struct ReportBundle {
    ojson report;
    std::vector<GridRow> rows;
};

ojson load_config_doc(const RunConfig& cfg) {
    if (!cfg.config_path) return ojson::object();
    std::ifstream f(*cfg.config_path);
    if (!f) throw PreconditionError("cannot read config file '" + *cfg.config_path + "'");
    ojson doc;
    try {
        f >> doc;
    } catch (const std::exception& e) {
        throw PreconditionError("config file parse error: " + std::string(e.what()));
    }
    return doc;
}

StarBody resolve_body(const std::string& text, const RunConfig& cfg, const ojson& config_doc) {
    if (!text.empty() && text[0] == '@') {
        const std::string label = text.substr(1);
        if (!config_doc.contains("bodies") || !config_doc.at("bodies").contains(label))
            throw PreconditionError("config file has no body labeled '" + label + "'");
        return make_body(body_spec_from_json(config_doc.at("bodies").at(label)));
    }
    return make_body(parse_body_string(text, cfg));
}

DirectionGrid resolve_grid(const RunConfig& cfg, int n) {
    if (!cfg.xi.empty()) {
        if (cfg.xi.size() != static_cast<std::size_t>(2 * n))
            throw PreconditionError("--xi must have 2n entries");
        DirectionGrid grid;
        grid.n = n;
        grid.construction = GridConstruction::uniform_seeded;
        grid.directions.emplace_back(cfg.xi);
        return grid;
    }
    std::string g = cfg.grid;
    std::replace(g.begin(), g.end(), '_', '-');
    if (g == "orbit-reduced") return orbit_reduced_grid(n, cfg.count);
    if (g == "uniform") return uniform_seeded_grid(n, cfg.count, cfg.seed);
    throw PreconditionError("unknown grid construction '" + cfg.grid +
                            "' (expected orbit-reduced or uniform)");
}

SectionMethod resolve_method(const std::string& m, bool* is_auto = nullptr) {
    if (is_auto) *is_auto = false;
    if (m == "analytic") return SectionMethod::analytic;
    if (m == "montecarlo" || m == "mc") return SectionMethod::montecarlo;
    if (m == "auto") {
        if (is_auto) *is_auto = true;
        return SectionMethod::montecarlo;
    }
    throw PreconditionError("unknown method '" + m + "' (expected auto|analytic|montecarlo)");
}

ojson value_error(double value, double error) {
    return ojson{{"value", value}, {"error_estimate", error}};
}

ojson direction_to_json(const UnitDirection& xi) {
    ojson arr = ojson::array();
    for (const double x : xi.coords()) arr.push_back(x);
    return arr;
}

std::vector<double> dir_vec(const UnitDirection& xi) {
    return {xi.coords().begin(), xi.coords().end()};
}

ojson echo_inputs(const RunConfig& cfg, int n_effective, int level_effective) {
    ojson in;
    in["command"] = cfg.command;
    if (cfg.body) in["body"] = *cfg.body;
    if (cfg.k) in["k"] = *cfg.k;
    if (cfg.l) in["l"] = *cfg.l;
    if (cfg.config_path) in["config"] = *cfg.config_path;
    in["n"] = n_effective;
    in["level"] = level_effective;
    in["samples"] = cfg.samples;
    in["seed"] = cfg.seed;
    in["count"] = cfg.count;
    in["grid"] = cfg.grid;
    in["method"] = cfg.method;
    in["h"] = cfg.h;
    in["richardson"] = cfg.richardson;
    in["format"] = cfg.format;
    if (!cfg.xi.empty()) in["xi"] = cfg.xi;
    if (cfg.has_u) in["u"] = ojson{cfg.u[0], cfg.u[1]};
    return in;
}

ReportBundle execute(const RunConfig& cfg) {
    const ojson config_doc = load_config_doc(cfg);
    ReportBundle bundle;
    ojson& report = bundle.report;
    report["schema_version"] = kReportSchemaVersion;
    report["library_version"] = kLibraryVersion;
    report["command"] = cfg.command;
    report["rng"] = ojson{{"algorithm", kRngAlgorithm}, {"seed", cfg.seed}};
    ojson outputs;
    WarningList warnings;

    auto require_body = [&](const std::optional<std::string>& text, const char* flag) {
        if (!text) throw PreconditionError(std::string("command '") + cfg.command +
                                           "' requires " + flag);
        return resolve_body(*text, cfg, config_doc);
    };

    if (cfg.command == "hvol") {
        const StarBody K = require_body(cfg.body, "--body");
        const int level = cfg.level > 0 ? cfg.level : default_level(K.n());
        const VolumeResult hv = hvol(K, level);
        const VolumeResult ev = evol(K, level);
        outputs["body"] = K.label();
        if (K.spec()) outputs["body_spec"] = body_spec_to_json(*K.spec());
        outputs["hvol"] = value_error(hv.value, hv.error_estimate);
        outputs["evol"] = value_error(ev.value, ev.error_estimate);
        outputs["transform_identity_residual"] = transform_volume_identity(K, level);
        bundle.rows.push_back({{}, hv.value, hv.error_estimate});
        report["inputs"] = echo_inputs(cfg, K.n(), level);
    } else if (cfg.command == "section") {
        const StarBody K = require_body(cfg.body, "--body");
        const int n = K.n();
        const int level = cfg.level > 0 ? cfg.level : default_level(n);
        report["inputs"] = echo_inputs(cfg, n, level);
        if (cfg.has_u) {
            DirectionGrid grid = resolve_grid(cfg, n);
            const UnitDirection& xi = grid.directions.front();
            bool is_auto = false;
            SectionMethod method = resolve_method(cfg.method, &is_auto);
            if (is_auto)
                method = analytic_section_supported(K, xi) ? SectionMethod::analytic
                                                           : SectionMethod::montecarlo;
            const double a = parallel_section(K, xi, cfg.u, method, cfg.samples, cfg.seed);
            outputs["body"] = K.label();
            outputs["parallel_section"] = a;
            outputs["method"] =
                method == SectionMethod::analytic ? "analytic" : "montecarlo";
            bundle.rows.push_back({dir_vec(xi), a, 0.0});
        } else {
            const DirectionGrid grid = resolve_grid(cfg, n);
            ojson rows = ojson::array();
            for (const auto& xi : grid.directions) {
                const VolumeResult s = hvol_section(K, xi, level);
                bundle.rows.push_back({dir_vec(xi), s.value, s.error_estimate});
                rows.push_back(ojson{{"xi", direction_to_json(xi)},
                                     {"value", s.value},
                                     {"error_estimate", s.error_estimate}});
            }
            outputs["body"] = K.label();
            outputs["hvol_sections"] = std::move(rows);
        }
    } else if (cfg.command == "radon" || cfg.command == "ft") {
        const bool is_ft = cfg.command == "ft";
        if (is_ft) {
            const StarBody K = require_body(cfg.body, "--body");
            const int n = K.n();
            const int level = cfg.level > 0 ? cfg.level : default_level(n);
            report["inputs"] = echo_inputs(cfg, n, level);
            const DirectionGrid grid = resolve_grid(cfg, n);
            bool is_auto = false;
            const SectionMethod explicit_method = resolve_method(cfg.method, &is_auto);
            ojson rows = ojson::array();
            for (std::size_t i = 0; i < grid.directions.size(); ++i) {
                const auto& xi = grid.directions[i];
                FtConfig fcfg;
                fcfg.level = level;
                fcfg.h = cfg.h;
                fcfg.richardson = cfg.richardson;
                fcfg.samples = cfg.samples;
                std::uint64_t s = cfg.seed + 0x9E3779B97F4A7C15ULL * (i + 1);
                fcfg.seed = splitmix64(s);
                fcfg.method = is_auto ? (analytic_section_supported(K, xi)
                                             ? SectionMethod::analytic
                                             : SectionMethod::montecarlo)
                                      : explicit_method;
                const FtValue v = ft_norm_minus2(K, xi, fcfg);
                bundle.rows.push_back({dir_vec(xi), v.value, v.error_estimate});
                rows.push_back(ojson{{"xi", direction_to_json(xi)},
                                     {"value", v.value},
                                     {"error_estimate", v.error_estimate}});
            }
            outputs["body"] = K.label();
            outputs["ft_norm_minus2"] = std::move(rows);
        } else {
            std::optional<StarBody> K;
            if (cfg.body) K = resolve_body(*cfg.body, cfg, config_doc);
            const int n = K ? K->n() : cfg.n;
            const int level = cfg.level > 0 ? cfg.level : default_level(n);
            report["inputs"] = echo_inputs(cfg, n, level);
            SphericalFunction f =
                K ? SphericalFunction(
                        [body = *K, p = cfg.power](std::span<const double> x) {
                            return std::pow(body.radial(x), p);
                        },
                        n, K->claims_rtheta_invariant(), true)
                  : SphericalFunction([](std::span<const double>) { return 1.0; }, n);
            const DirectionGrid grid = resolve_grid(cfg, n);
            ojson rows = ojson::array();
            for (const auto& xi : grid.directions) {
                const double v = radon_complex(f, xi, level, &warnings);
                const double v_coarse =
                    radon_complex(f, xi, std::max(level / 2, 2), nullptr);
                const double err = std::abs(v - v_coarse);
                bundle.rows.push_back({dir_vec(xi), v, err});
                rows.push_back(ojson{{"xi", direction_to_json(xi)},
                                     {"value", v},
                                     {"error_estimate", err}});
            }
            outputs["function"] = K ? (K->label() + " radial^" + fmt17(cfg.power)) : "1";
            outputs["radon"] = std::move(rows);
        }
    } else if (cfg.command == "pd-check") {
        const StarBody K = require_body(cfg.body ? cfg.body : cfg.k, "--body");
        const int n = K.n();
        const int level = cfg.level > 0 ? cfg.level : default_level(n);
        report["inputs"] = echo_inputs(cfg, n, level);
        const DirectionGrid grid = resolve_grid(cfg, n);
        PdConfig pd_cfg;
        pd_cfg.level = level;
        pd_cfg.h = cfg.h;
        pd_cfg.richardson = cfg.richardson;
        pd_cfg.samples = cfg.samples;
        pd_cfg.seed = cfg.seed;
        if (cfg.method == "analytic") pd_cfg.method = PdConfig::Method::analytic;
        else if (cfg.method == "montecarlo" || cfg.method == "mc")
            pd_cfg.method = PdConfig::Method::montecarlo;
        else pd_cfg.method = PdConfig::Method::automatic;
        const PDReport rep = pd_check(K, grid, pd_cfg);
        outputs["body"] = rep.body_label;
        outputs["verdict"] = rep.verdict == PdVerdict::negative_direction_found
                                 ? "negative_direction_found"
                                 : "positive_definite_on_grid";
        outputs["min_value"] = rep.min_value;
        outputs["tol"] = rep.tol;
        if (rep.witness) outputs["witness"] = direction_to_json(*rep.witness);
        ojson rows = ojson::array();
        for (const auto& e : rep.per_direction) {
            bundle.rows.push_back({dir_vec(e.xi), e.ft_value, e.error_estimate});
            rows.push_back(ojson{{"xi", direction_to_json(e.xi)},
                                 {"value", e.ft_value},
                                 {"error_estimate", e.error_estimate}});
        }
        outputs["per_direction"] = std::move(rows);
        for (const auto& w : rep.warnings) warnings.push_back(w);
    } else if (cfg.command == "bp-compare") {
        const StarBody K = require_body(cfg.k, "--k");
        const StarBody L = require_body(cfg.l, "--l");
        const int n = K.n();
        const int level = cfg.level > 0 ? cfg.level : default_level(n);
        report["inputs"] = echo_inputs(cfg, n, level);
        const DirectionGrid grid = resolve_grid(cfg, n);
        BpConfig bp_cfg;
        bp_cfg.level = level;
        const BPReport rep = bp_compare(K, L, grid, bp_cfg);
        outputs["k"] = rep.k_label;
        outputs["l"] = rep.l_label;
        outputs["verdict"] = rep.verdict == BpVerdict::hypothesis_fails ? "hypothesis_fails"
                             : rep.verdict == BpVerdict::consistent
                                 ? "consistent"
                                 : "counterexample_to_BP";
        outputs["section_margin"] = rep.section_margin;
        outputs["section_tol"] = rep.section_tol;
        outputs["volume_K"] = rep.volume_K;
        outputs["volume_L"] = rep.volume_L;
        outputs["volume_delta"] = rep.volume_delta;
        outputs["volume_tol"] = rep.volume_tol;
        ojson rows = ojson::array();
        for (const auto& e : rep.per_direction) {
            bundle.rows.push_back({dir_vec(e.xi), e.margin, 0.0});
            rows.push_back(ojson{{"xi", direction_to_json(e.xi)},
                                 {"section_K", e.section_K},
                                 {"section_L", e.section_L},
                                 {"margin", e.margin}});
        }
        outputs["per_direction"] = std::move(rows);
    } else if (cfg.command == "counterexample") {
        const double a = cfg.a.value_or(2.0);
        const double b = cfg.b.value_or(2.0);
        const StarBody K = make_counterexample_K(a, b);
        const StarBody M = hyperbolic_transform(K);
        const UnitDirection xi(std::vector<double>{0, 0, 0, 0, 1, 0});
        const int level = cfg.level > 0 ? cfg.level : default_level(3);
        report["inputs"] = echo_inputs(cfg, 3, level);

        const double a0 = parallel_section(M, xi, {0.0, 0.0}, SectionMethod::analytic);
        const auto lap =
            laplacian_A_at_zero(M, xi, cfg.h, SectionMethod::analytic, cfg.richardson);
        FtConfig fcfg;
        fcfg.level = level;
        fcfg.h = cfg.h;
        fcfg.richardson = cfg.richardson;
        const FtValue ft = ft_norm_minus2(M, xi, fcfg);
        const double am1 = a * a - 1.0;
        outputs["body"] = K.label();
        outputs["transformed_body"] = M.label();
        outputs["xi"] = direction_to_json(xi);
        outputs["section_at_zero"] = a0;
        outputs["section_at_zero_expected"] = kPi * kPi / (2.0 * am1 * am1);
        outputs["laplacian_at_zero"] = lap.value;
        outputs["laplacian_at_zero_expected"] = 4.0 * kPi * kPi / (am1 * am1);
        outputs["ft"] = value_error(ft.value, ft.error_estimate);
        outputs["ft_expected"] = -16.0 * kPi * kPi * kPi / (am1 * am1);
        if (cfg.samples > 0) {
            FtConfig mc_cfg = fcfg;
            mc_cfg.method = SectionMethod::montecarlo;
            mc_cfg.samples = cfg.samples;
            mc_cfg.seed = cfg.seed;
            const FtValue ft_mc = ft_norm_minus2(M, xi, mc_cfg);
            outputs["ft_montecarlo"] = value_error(ft_mc.value, ft_mc.error_estimate);
            const McEstimate a0_mc = mc_section_volume(
                M, section_frame(xi), {0.0, 0.0}, SectionWeight::euclidean, cfg.samples,
                cfg.seed);
            outputs["section_at_zero_montecarlo"] =
                ojson{{"value", a0_mc.value}, {"std_error", a0_mc.std_error}};
        }
        DirectionGrid grid;
        grid.n = 3;
        grid.directions.push_back(xi);
        PdConfig pd_cfg;
        pd_cfg.level = level;
        pd_cfg.method = PdConfig::Method::analytic;
        const PDReport rep = pd_check(K, grid, pd_cfg);
        outputs["pd_verdict"] = rep.verdict == PdVerdict::negative_direction_found
                                    ? "negative_direction_found"
                                    : "positive_definite_on_grid";
        bundle.rows.push_back({dir_vec(xi), ft.value, ft.error_estimate});
    } else if (cfg.command == "solution-table") {
        const int level = cfg.level;
        report["inputs"] = echo_inputs(cfg, cfg.n, level);
        SolutionTableConfig st_cfg;
        st_cfg.grid_count_n2 = std::max<std::size_t>(cfg.count, 200);
        st_cfg.extra_directions_n3 = 4;
        st_cfg.samples = cfg.samples;
        st_cfg.seed = cfg.seed;
        st_cfg.level = level;
        const SolutionTable table = solution_table(st_cfg);
        ojson rows = ojson::array();
        for (const auto& row : table.rows) {
            ojson r;
            r["dimension"] = row.dimension;
            r["verdict"] = row.verdict;
            if (std::isfinite(row.min_ft_value)) r["min_ft_value"] = row.min_ft_value;
            if (row.witness_value) r["witness_value"] = *row.witness_value;
            r["note"] = row.note;
            rows.push_back(std::move(r));
            bundle.rows.push_back(
                {{}, row.min_ft_value, 0.0});
        }
        outputs["rows"] = std::move(rows);
    } else {
        throw PreconditionError("unknown command '" + cfg.command +
                                "' (expected hvol|section|radon|ft|pd-check|bp-compare|"
                                "counterexample|solution-table|selftest)");
    }

    if (!report.contains("inputs")) report["inputs"] = echo_inputs(cfg, cfg.n, cfg.level);
    report["outputs"] = std::move(outputs);
    ojson warn = ojson::array();
    for (const auto& w : warnings) warn.push_back(w);
    report["warnings"] = std::move(warn);
    return bundle;
}

std::string iso_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace

nlohmann::ordered_json build_report(const RunConfig& cfg) { return execute(cfg).report; }

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        if (cfg.command == "selftest") {
            const int failures = run_acceptance_suite(out, AcceptanceOptions{});
            return failures == 0 ? 0 : 1;
        }
        ReportBundle bundle = execute(cfg);
        bundle.report["timestamp"] = iso_timestamp();
        if (cfg.format == "csv") {
            if (cfg.out) emit_grid_csv(bundle.rows, *cfg.out);
            else emit_grid_csv(bundle.rows, out);
        } else if (cfg.format == "json") {
            const std::string text = bundle.report.dump(2) + "\n";
            if (cfg.out) {
                std::ofstream f(*cfg.out);
                if (!f) throw GuardError("cannot write report to '" + *cfg.out + "'");
                f << text;
                f.flush();
                if (!f) throw GuardError("write failed for '" + *cfg.out + "'");
            } else {
                out << text;
            }
        } else {
            throw PreconditionError("unknown format '" + cfg.format + "' (expected json|csv)");
        }
        return 0;
    } catch (const PreconditionError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const GuardError& e) {
        err << "numerical guard: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    }
}

} // namespace cxhyp
