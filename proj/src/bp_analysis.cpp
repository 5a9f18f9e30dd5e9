#include "cxhyp/bp_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "cxhyp/rng.hpp"
#include "cxhyp/vec.hpp"

namespace cxhyp {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMinOrbitSeparation = 1e-6;

double radical_inverse(std::size_t index, unsigned base) {
    double inv = 1.0 / base, f = inv, value = 0.0;
    for (std::size_t i = index; i > 0; i /= base) {
        value += static_cast<double>(i % base) * f;
        f *= inv;
    }
    return value;
}

std::uint64_t direction_seed(std::uint64_t seed, std::size_t index) {
    std::uint64_t s = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
    return splitmix64(s);
}

void check_orbit_separation(const std::vector<UnitDirection>& dirs) {
    for (std::size_t i = 0; i < dirs.size(); ++i)
        for (std::size_t j = i + 1; j < dirs.size(); ++j)
            if (orbit_distance(dirs[i].coords(), dirs[j].coords()) <= kMinOrbitSeparation)
                throw PreconditionError("orbit_reduced_grid: orbit separation violated");
}

} // namespace

DirectionGrid orbit_reduced_grid(int n, std::size_t count) {
    if (count < 1) throw PreconditionError("orbit_reduced_grid: count must be >= 1");
    if (n != 2 && n != 3)
        throw PreconditionError("orbit_reduced_grid: supported complex dimensions are 2 and 3");
    DirectionGrid grid;
    grid.n = n;
    grid.construction = GridConstruction::orbit_reduced;
    grid.directions.reserve(count);

    if (n == 2) {
        // The orbit space is a 2-sphere; a Fibonacci lattice on it maps back
        // to representatives (cos eta, 0, sin eta cos d, sin eta sin d).
        const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
        for (std::size_t i = 0; i < count; ++i) {
            const double z = 1.0 - 2.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(count);
            const double eta = std::acos(z) / 2.0;
            const double d = 2.0 * kPi * std::fmod(static_cast<double>(i) / golden, 1.0);
            grid.directions.emplace_back(std::vector<double>{
                std::cos(eta), 0.0, std::sin(eta) * std::cos(d), std::sin(eta) * std::sin(d)});
        }
    } else {
        // Halton points in the four quotient parameters (two modulus splits,
        // two relative phases); candidates too close to an existing orbit
        // are skipped.
        std::size_t index = 1;
        while (grid.directions.size() < count && index < 100 * count + 1000) {
            const double v = radical_inverse(index, 2);
            const double u = radical_inverse(index, 3);
            const double alpha = 2.0 * kPi * radical_inverse(index, 5);
            const double beta = 2.0 * kPi * radical_inverse(index, 7);
            ++index;
            const double r1 = std::sqrt(1.0 - v);
            const double r2 = std::sqrt(v * (1.0 - u));
            const double r3 = std::sqrt(v * u);
            UnitDirection cand(std::vector<double>{r1, 0.0, r2 * std::cos(alpha),
                                                   r2 * std::sin(alpha), r3 * std::cos(beta),
                                                   r3 * std::sin(beta)});
            bool ok = true;
            for (const auto& d : grid.directions)
                if (orbit_distance(cand.coords(), d.coords()) <= kMinOrbitSeparation) {
                    ok = false;
                    break;
                }
            if (ok) grid.directions.push_back(std::move(cand));
        }
        if (grid.directions.size() < count)
            throw PreconditionError("orbit_reduced_grid: could not place enough separated orbits");
    }
    if (count <= 4096) check_orbit_separation(grid.directions);
    return grid;
}

DirectionGrid uniform_seeded_grid(int n, std::size_t count, std::uint64_t seed) {
    if (count < 1) throw PreconditionError("uniform_seeded_grid: count must be >= 1");
    if (n < 1) throw PreconditionError("uniform_seeded_grid: n must be >= 1");
    DirectionGrid grid;
    grid.n = n;
    grid.construction = GridConstruction::uniform_seeded;
    grid.directions.reserve(count);
    Xoshiro256pp rng(splitmix64(seed));
    std::vector<double> g(static_cast<std::size_t>(2 * n));
    while (grid.directions.size() < count) {
        rng.fill_gaussian(g);
        const double nrm = vec::norm(g);
        if (nrm < 1e-12) continue;
        std::vector<double> coords(g);
        vec::scale(coords, 1.0 / nrm);
        grid.directions.emplace_back(std::move(coords));
    }
    return grid;
}

PDReport pd_check(const StarBody& K, const DirectionGrid& grid, const PdConfig& cfg) {
    const int n = K.n();
    if (n != 2 && n != 3)
        throw PreconditionError("pd_check: implemented for complex dimensions 2 and 3");
    if (grid.n != n) throw PreconditionError("pd_check: grid dimension mismatch");
    if (grid.directions.empty()) throw PreconditionError("pd_check: empty direction grid");
    if (!K.claims_rtheta_invariant())
        throw PreconditionError("pd_check: body must be R_theta-invariant");

    PDReport report;
    report.body_label = K.label();
    const StarBody M = hyperbolic_transform(K, cfg.delta);

    report.per_direction.reserve(grid.directions.size());
    for (std::size_t i = 0; i < grid.directions.size(); ++i) {
        const UnitDirection& xi = grid.directions[i];
        FtConfig ft_cfg;
        ft_cfg.level = cfg.level;
        ft_cfg.h = cfg.h;
        ft_cfg.richardson = cfg.richardson;
        ft_cfg.samples = cfg.samples;
        ft_cfg.seed = direction_seed(cfg.seed, i);
        switch (cfg.method) {
            case PdConfig::Method::analytic:
                ft_cfg.method = SectionMethod::analytic;
                break;
            case PdConfig::Method::montecarlo:
                ft_cfg.method = SectionMethod::montecarlo;
                break;
            case PdConfig::Method::automatic:
                ft_cfg.method = analytic_section_supported(M, xi) ? SectionMethod::analytic
                                                                  : SectionMethod::montecarlo;
                break;
        }
        const FtValue ft = ft_norm_minus2(M, xi, ft_cfg);
        report.per_direction.push_back({xi, ft.value, ft.error_estimate});
    }

    std::size_t argmin = 0;
    bool negative = false;
    for (std::size_t i = 0; i < report.per_direction.size(); ++i) {
        const auto& e = report.per_direction[i];
        if (e.ft_value < report.per_direction[argmin].ft_value) argmin = i;
        if (e.ft_value < -3.0 * e.error_estimate) negative = true;
    }
    report.min_value = report.per_direction[argmin].ft_value;
    report.tol = 3.0 * report.per_direction[argmin].error_estimate;
    report.verdict =
        negative ? PdVerdict::negative_direction_found : PdVerdict::positive_definite_on_grid;
    if (negative) report.witness = report.per_direction[argmin].xi;
    return report;
}

BPReport bp_compare(const StarBody& K, const StarBody& L, const DirectionGrid& grid,
                    const BpConfig& cfg) {
    if (K.n() != L.n()) throw PreconditionError("bp_compare: dimension mismatch");
    if (grid.n != K.n()) throw PreconditionError("bp_compare: grid dimension mismatch");
    if (grid.directions.empty()) throw PreconditionError("bp_compare: empty direction grid");

    BPReport report;
    report.k_label = K.label();
    report.l_label = L.label();

    const VolumeResult vK = hvol(K, cfg.level);
    const VolumeResult vL = hvol(L, cfg.level);
    report.volume_K = vK.value;
    report.volume_L = vL.value;
    report.volume_delta = vL.value - vK.value;
    report.volume_tol = 3.0 * (vK.error_estimate + vL.error_estimate);

    double min_margin = std::numeric_limits<double>::infinity();
    double max_err = 0.0;
    for (const auto& xi : grid.directions) {
        const VolumeResult sK = hvol_section(K, xi, cfg.level);
        const VolumeResult sL = hvol_section(L, xi, cfg.level);
        const double margin = sL.value - sK.value;
        min_margin = std::min(min_margin, margin);
        max_err = std::max(max_err, sK.error_estimate + sL.error_estimate);
        report.per_direction.push_back({xi, sK.value, sL.value, margin});
    }
    report.section_margin = min_margin;
    report.section_tol = 3.0 * max_err;

    if (report.section_margin < -report.section_tol)
        report.verdict = BpVerdict::hypothesis_fails;
    else if (report.volume_delta < -report.volume_tol)
        report.verdict = BpVerdict::counterexample_to_BP;
    else
        report.verdict = BpVerdict::consistent;
    return report;
}

MonotoneChainReport monotone_comparison_check(const StarBody& K, const StarBody& L,
                                              const DirectionGrid& grid, const BpConfig& cfg) {
    if (K.n() != 2 || L.n() != 2)
        throw PreconditionError("monotone_comparison_check: complex dimension 2 only");
    const int n = 2;
    const int level = cfg.level > 0 ? cfg.level : default_level(n);

    MonotoneChainReport rep;

    double min_margin = std::numeric_limits<double>::infinity();
    double max_err = 0.0;
    for (const auto& xi : grid.directions) {
        const VolumeResult sK = hvol_section(K, xi, level);
        const VolumeResult sL = hvol_section(L, xi, level);
        min_margin = std::min(min_margin, sL.value - sK.value);
        max_err = std::max(max_err, sK.error_estimate + sL.error_estimate);
    }
    rep.min_section_margin = min_margin;
    rep.sections_ordered = min_margin >= -3.0 * max_err;
    if (!rep.sections_ordered) return rep; // hypothesis fails; nothing to chain

    PdConfig pd_cfg;
    pd_cfg.level = level;
    rep.pd_min_value = pd_check(K, grid, pd_cfg).min_value;

    const bool reduced = K.claims_rtheta_invariant() && L.claims_rtheta_invariant();
    rep.aos_lhs = integrate_sphere(n, level, reduced, [&](std::span<const double> x) {
        const double a = K.radial(x);
        const double b = L.radial(x);
        const double v = a * a / ((1.0 - a) * (1.0 + a));
        return v * (radial_hyp_integral(b, n - 1) - radial_hyp_integral(a, n - 1));
    });
    rep.aos_rhs = integrate_sphere(n, level, reduced, [&](std::span<const double> x) {
        return radial_hyp_integral(L.radial(x), n) - radial_hyp_integral(K.radial(x), n);
    });

    const VolumeResult hK = hvol(K, level);
    const VolumeResult hL = hvol(L, level);
    rep.hvol_K = hK.value;
    rep.hvol_L = hL.value;

    rep.tol = 3.0 * (hK.error_estimate + hL.error_estimate) +
              1e-12 * (std::abs(rep.aos_lhs) + std::abs(rep.aos_rhs) + 1.0);
    rep.lhs_nonnegative = rep.aos_lhs >= -rep.tol;
    rep.kernel_inequality_holds = rep.aos_lhs <= rep.aos_rhs + rep.tol;
    rep.conclusion_holds = rep.hvol_K <= rep.hvol_L + rep.tol;
    return rep;
}

SolutionTable solution_table(const SolutionTableConfig& cfg) {
    SolutionTable table;

    // Complex dimension 2: the FT values are slice areas, nonnegative for
    // the whole catalog.
    {
        const DirectionGrid grid = orbit_reduced_grid(2, cfg.grid_count_n2);
        const std::vector<StarBody> catalog = {
            make_ball(0.5, 2),
            make_complex_ellipsoid({0.6, 0.35}),
            hyperbolic_transform(make_ball(0.4, 2)),
            radial_perturbation(make_ball(0.45, 2), 0.05),
        };
        double min_value = std::numeric_limits<double>::infinity();
        bool all_positive = true;
        PdConfig pd_cfg;
        pd_cfg.level = cfg.level;
        pd_cfg.seed = cfg.seed;
        for (const auto& body : catalog) {
            const PDReport rep = pd_check(body, grid, pd_cfg);
            min_value = std::min(min_value, rep.min_value);
            all_positive =
                all_positive && rep.verdict == PdVerdict::positive_definite_on_grid;
        }
        SolutionRow row;
        row.dimension = "n=2";
        row.verdict = all_positive ? "affirmative" : "negative";
        row.min_ft_value = min_value;
        std::ostringstream note;
        note << "catalog of " << catalog.size() << " bodies, " << grid.directions.size()
             << " orbit representatives";
        row.note = note.str();
        table.rows.push_back(std::move(row));
    }

    // Complex dimension 3: the cylinder/ellipsoid body yields a negative
    // FT value along the distinguished coordinate plane.
    {
        const StarBody K = make_counterexample_K(2.0, 2.0);
        DirectionGrid grid;
        grid.n = 3;
        grid.construction = GridConstruction::orbit_reduced;
        grid.directions.emplace_back(std::vector<double>{0, 0, 0, 0, 1, 0});
        if (cfg.extra_directions_n3 > 0) {
            const DirectionGrid extra = orbit_reduced_grid(3, cfg.extra_directions_n3);
            for (const auto& d : extra.directions) grid.directions.push_back(d);
        }
        PdConfig pd_cfg;
        pd_cfg.level = cfg.level;
        pd_cfg.samples = cfg.samples;
        pd_cfg.seed = cfg.seed;
        const PDReport rep = pd_check(K, grid, pd_cfg);
        SolutionRow row;
        row.dimension = "n=3";
        row.verdict =
            rep.verdict == PdVerdict::negative_direction_found ? "negative" : "affirmative";
        row.min_ft_value = rep.min_value;
        if (rep.witness) row.witness_value = rep.min_value;
        row.note = "witness body " + K.label();
        table.rows.push_back(std::move(row));
    }

    {
        SolutionRow row;
        row.dimension = "n>=4";
        row.verdict = "negative";
        row.min_ft_value = std::numeric_limits<double>::quiet_NaN();
        row.note = "imported from the flat complex counterexample bodies; not recomputed";
        table.rows.push_back(std::move(row));
    }
    return table;
}

} // namespace cxhyp
