#pragma once

// Positive-definiteness verdicts for the comparison distribution
// ||x||_K^{-2} / (1 - (|x|/||x||_K)^2), section-vs-volume comparison over
// direction grids, and the per-dimension verdict table those computations
// support. The distribution's Fourier transform on the sphere is evaluated
// as (||x||_M^{-2})^\wedge for M the hyperbolic transform of K; by the
// section identities this is 4 pi A_M(0) in complex dimension 2 (a slice
// area, hence nonnegative) and -4 pi Lap A_M(0) in complex dimension 3.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cxhyp/bodies.hpp"
#include "cxhyp/geometry.hpp"
#include "cxhyp/hyperbolic_volume.hpp"
#include "cxhyp/transforms.hpp"

namespace cxhyp {

enum class GridConstruction { orbit_reduced, uniform_seeded };

// Direction set on S^{2n-1}; orbit_reduced grids carry one representative
// per R_theta-orbit (the transforms evaluated here are constant along
// orbits, so per-orbit sampling loses nothing).
struct DirectionGrid {
    std::vector<UnitDirection> directions;
    int n = 0;
    GridConstruction construction = GridConstruction::orbit_reduced;
};

// Deterministic low-discrepancy representatives of the orbit space
// (a 2-sphere for n=2, four quotient parameters for n=3); pairwise orbit
// distance is kept above 1e-6.
DirectionGrid orbit_reduced_grid(int n, std::size_t count);

DirectionGrid uniform_seeded_grid(int n, std::size_t count, std::uint64_t seed);

enum class PdVerdict { positive_definite_on_grid, negative_direction_found };

struct PdEntry {
    UnitDirection xi;
    double ft_value = 0.0;
    double error_estimate = 0.0;
};

struct PDReport {
    std::string body_label;
    std::vector<PdEntry> per_direction;
    double min_value = 0.0;
    double tol = 0.0; // 3x propagated error at the minimizing direction
    PdVerdict verdict = PdVerdict::positive_definite_on_grid;
    std::optional<UnitDirection> witness; // present iff a negative direction was found
    WarningList warnings;
};

struct PdConfig {
    int level = 0;
    enum class Method { automatic, analytic, montecarlo };
    Method method = Method::automatic;
    double h = 1e-2;
    bool richardson = true;
    std::size_t samples = 200'000;
    std::uint64_t seed = 1;
    double delta = 1e-6; // unit-ball containment guard for the transform
};

PDReport pd_check(const StarBody& K, const DirectionGrid& grid, const PdConfig& cfg = {});

enum class BpVerdict { hypothesis_fails, consistent, counterexample_to_BP };

struct BpEntry {
    UnitDirection xi;
    double section_K = 0.0;
    double section_L = 0.0;
    double margin = 0.0; // section_L - section_K
};

struct BPReport {
    std::string k_label, l_label;
    std::vector<BpEntry> per_direction;
    double section_margin = 0.0; // min margin over the grid
    double section_tol = 0.0;
    double volume_K = 0.0, volume_L = 0.0;
    double volume_delta = 0.0; // volume_L - volume_K
    double volume_tol = 0.0;
    BpVerdict verdict = BpVerdict::consistent;
};

struct BpConfig {
    int level = 0;
};

BPReport bp_compare(const StarBody& K, const StarBody& L, const DirectionGrid& grid,
                    const BpConfig& cfg = {});

// Numerical trace of the affirmative-direction argument in complex
// dimension 2: section ordering, the positive-definiteness certificate for
// K, the integrated monotone-kernel inequality, and the volume conclusion.
struct MonotoneChainReport {
    bool sections_ordered = false;
    double min_section_margin = 0.0;
    double pd_min_value = 0.0;     // certificate: min FT value for K over the grid
    double aos_lhs = 0.0;          // int v_K [F_{n-1}(rho_L) - F_{n-1}(rho_K)]
    double aos_rhs = 0.0;          // int [F_n(rho_L) - F_n(rho_K)]
    double hvol_K = 0.0, hvol_L = 0.0;
    double tol = 0.0;
    bool lhs_nonnegative = false;
    bool kernel_inequality_holds = false;
    bool conclusion_holds = false;
};

MonotoneChainReport monotone_comparison_check(const StarBody& K, const StarBody& L,
                                              const DirectionGrid& grid,
                                              const BpConfig& cfg = {});

struct SolutionRow {
    std::string dimension;
    std::string verdict; // affirmative | negative
    double min_ft_value = 0.0;
    std::optional<double> witness_value;
    std::string note;
};

struct SolutionTable {
    std::vector<SolutionRow> rows;
};

struct SolutionTableConfig {
    std::size_t grid_count_n2 = 200;
    std::size_t extra_directions_n3 = 4; // Monte Carlo directions beyond the witness
    std::size_t samples = 200'000;
    std::uint64_t seed = 1;
    int level = 0;
};

// Canned experiment suite: positive-definiteness across the catalog in
// complex dimension 2, the negative witness in dimension 3, and the
// imported flat counterexample marker for dimension >= 4.
SolutionTable solution_table(const SolutionTableConfig& cfg = {});

} // namespace cxhyp
