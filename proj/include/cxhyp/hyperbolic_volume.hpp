#pragma once

// Volumes under the Bergman volume element
//   d mu_n = 8^n r^{2n-1} (1 - r^2)^{-(n+1)} dr dsigma
// on the unit ball of R^{2n}, central complex-hyperplane section volumes,
// Euclidean counterparts, and the flat-vs-hyperbolic sandwich bounds. The
// radial integral is the closed form from radial_hyp_integral, so the
// (1-r^2) near-singularity never enters a numerical path.

#include <vector>

#include "cxhyp/bodies.hpp"
#include "cxhyp/geometry.hpp"
#include "cxhyp/quadrature.hpp"

namespace cxhyp {

enum class VolumeMethod { closed_form_quadrature, montecarlo };

struct VolumeResult {
    double value = 0.0;
    VolumeMethod method = VolumeMethod::closed_form_quadrature;
    double error_estimate = 0.0;
};

// HVol_{2n}(K) = 8^n int_{S^{2n-1}} radial_hyp_integral(rho_K, n) dsigma.
// Requires the body inside the open unit ball.
VolumeResult hvol(const StarBody& K, int level = 0);

// Euclidean volume (1/2n) int rho_K^{2n} dsigma.
VolumeResult evol(const StarBody& K, int level = 0);

// HVol_{2n-2}(K cap H_xi) = 8^{n-1} int_{S^{2n-1} cap H_xi}
// radial_hyp_integral(rho_K, n-1); n >= 2.
VolumeResult hvol_section(const StarBody& K, const UnitDirection& xi, int level = 0);

// Euclidean central section volume (1/(2n-2)) int_{sub} rho_K^{2n-2}.
VolumeResult evol_section(const StarBody& K, const UnitDirection& xi, int level = 0);

// Relative residual |HVol(K) - 8^n Vol(M)| / HVol(K) for M the hyperbolic
// transform of K; the radial substitution v = r^2/(1-r^2) makes the two
// sides equal exactly.
double transform_volume_identity(const StarBody& K, int level = 0);

struct SandwichReport {
    double s = 0.0;
    double volume_ratio = 0.0;      // hvol / (8^n evol), expected in [1, volume_bound]
    double volume_bound = 0.0;      // (1-s^2)^{-(n+1)}
    std::vector<double> section_ratios; // per probed direction, bound exponent n
    double section_bound = 0.0;
    double slack = 1e-8;
    bool ok = false;
};

// Verifies 8^n Vol <= HVol <= 8^n Vol / (1-s^2)^{n+1} and the section
// analogue (exponent n) on a probe direction set; requires sup rho_K <= s.
SandwichReport sandwich_check(const StarBody& K, double s, int level = 0, int directions = 8);

} // namespace cxhyp
