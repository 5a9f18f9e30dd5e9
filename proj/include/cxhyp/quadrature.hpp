#pragma once

// Deterministic quadrature on S^{2n-1} and on the subspheres
// S^{2n-1} cap H_xi, the closed-form radial integral of the hyperbolic
// kernel, and seeded Monte Carlo section-volume estimators.
//
// Sphere rules are product rules in complex polar coordinates
// z_k = r_k e^{i phi_k}: Gauss-Legendre in the squared moduli, uniform
// (trapezoid) circles in the phases. Phase circles are uniform grids, so the
// R_theta action maps nodes onto nodes. For integrands invariant under the
// simultaneous phase rotation, the diagonal circle can be quotiented out
// ("reduced" rules): one phase is pinned to zero and the weight picks up a
// factor 2*pi. That keeps S^5 rules tractable at high level.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "cxhyp/bodies.hpp"
#include "cxhyp/errors.hpp"
#include "cxhyp/geometry.hpp"
#include "cxhyp/parallel.hpp"

namespace cxhyp {

// |S^d| = 2 pi^{(d+1)/2} / Gamma((d+1)/2)
double sphere_surface(int d);

// Volume of the d-ball of radius r.
double ball_volume(int d, double r);

// Materialized rule; nodes may live in a higher-dimensional ambient space
// (subsphere rules embed S^{2n-3} into R^{2n}).
struct SphereRule {
    int sphere_dim = 0;
    int ambient_dim = 0;
    std::vector<double> nodes;   // flat, ambient_dim entries per node
    std::vector<double> weights; // positive, summing to |S^sphere_dim|

    std::size_t size() const { return weights.size(); }
    std::span<const double> node(std::size_t i) const {
        return {nodes.data() + i * ambient_dim, static_cast<std::size_t>(ambient_dim)};
    }
    double target_total() const { return sphere_surface(sphere_dim); }
};

// Lazy product rule on S^{2n-1}; nodes are computed on demand so high-level
// S^5 rules never have to be materialized.
class ProductSphereRule {
public:
    // reduced=true pins the first phase circle; only valid for
    // R_theta-invariant integrands.
    ProductSphereRule(int n_complex, int level, bool reduced);

    std::size_t size() const { return size_; }
    int ambient_dim() const { return 2 * n_; }
    bool reduced() const { return reduced_; }

    // Writes the node coordinates into out (length 2n) and returns its weight.
    double node(std::size_t idx, std::span<double> out) const;

private:
    int n_;
    bool reduced_;
    std::size_t nphi_;
    std::size_t size_;
    std::vector<double> gl_nodes_u_, gl_weights_u_; // inner modulus split
    std::vector<double> gl_nodes_v_, gl_weights_v_; // outer modulus split (n=3)
};

int phase_points(int level);

// Default rule resolution per complex dimension (32 for n=2, 24 for n=3).
int default_level(int n);

// d in {1,3,5}; exact for spherical polynomials up to degree 2*level.
SphereRule sphere_rule(int d, int level);

// Rule on S^{2n-1} cap H_xi (a (2n-3)-sphere) embedded through frame.basis.
SphereRule subsphere_rule(const SectionFrame& frame, int level);

// integral over S^{2n-1} of f(node); reduced rules only for invariant f.
template <class F>
double integrate_sphere(int n_complex, int level, bool reduced, F&& f) {
    const ProductSphereRule rule(n_complex, level, reduced);
    std::vector<double> x_storage; // per-chunk scratch handled inside lambda
    (void)x_storage;
    const int dim = rule.ambient_dim();
    return deterministic_sum(rule.size(), [&rule, &f, dim](std::size_t i) {
        std::array<double, 8> buf{};
        std::span<double> x(buf.data(), static_cast<std::size_t>(dim));
        const double w = rule.node(i, x);
        return w * f(std::span<const double>(x.data(), x.size()));
    });
}

// integral over a materialized rule of f(node).
template <class F>
double integrate_rule(const SphereRule& rule, F&& f) {
    return deterministic_sum(rule.size(), [&rule, &f](std::size_t i) {
        return rule.weights[i] * f(rule.node(i));
    });
}

// int_0^rho r^{2m-1} / (1-r^2)^{m+1} dr = (1/(2m)) (rho^2/(1-rho^2))^m.
// m = n is the hyperbolic volume kernel, m = n-1 the section kernel.
double radial_hyp_integral(double rho, int m);

struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
};

enum class SectionWeight { euclidean, hyperbolic };

// Monte Carlo (2n-2)-volume of K cap {H_xi + offset_1 xi + offset_2 xi_perp}
// under the chosen density. Rejection sampling in a bounding ball of the
// slice, radius certified by the body's circumradius and tightened by a
// 64-direction radial sweep; sampling is stratified in the radial coordinate.
// The hyperbolic weight is defined for central slices only (offset = 0).
McEstimate mc_section_volume(const StarBody& K, const SectionFrame& frame,
                             std::array<double, 2> offset, SectionWeight weight,
                             std::size_t samples, std::uint64_t seed);

// Distance from the offset point u_1 xi + u_2 xi_perp to the slice boundary
// along the in-plane unit direction w (given in frame.basis coordinates).
// Returns 0 when the offset point lies outside the body.
double slice_ray_hit(const StarBody& K, const SectionFrame& frame,
                     std::array<double, 2> offset, std::span<const double> w_basis);

// Bisection for sup{t : origin + t dir in K}, starting from the bracket
// [0, hi_start] and expanding if needed. origin must be inside K.
// Allocation-free for dim <= 16; safe for concurrent use.
double ray_boundary_hit(const StarBody& K, std::span<const double> origin,
                        std::span<const double> dir_unit, double hi_start);

} // namespace cxhyp
