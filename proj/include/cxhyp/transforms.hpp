#pragma once

// The complex spherical Radon transform, Fourier transforms of homogeneous
// R_theta-invariant functions obtained through it, parallel section
// functions with their Laplacian at the origin, and a numerical Parseval
// validator.
//
// Identities realized here, restricted to the unit sphere:
//   R_c f(xi)                 = integral of f over S^{2n-1} cap H_xi
//   (f r^{-2n+2})^\wedge(xi)  = 2 pi R_c f(xi)
//   n=2:  A_{K,H_xi}(0)       =  (1/(4 pi)) (||x||_K^{-2})^\wedge(xi)
//   n=3:  Lap A_{K,H_xi}(0)   = -(1/(4 pi)) (||x||_K^{-2})^\wedge(xi)
// A is radial in the offset for R_theta-invariant bodies, so
// Lap A(0) = 2 A''(0), approximated by 4 (A(h e_1) - A(0)) / h^2 with an
// optional Richardson halving step.

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "cxhyp/bodies.hpp"
#include "cxhyp/geometry.hpp"
#include "cxhyp/quadrature.hpp"

namespace cxhyp {

// Continuous function on S^{2n-1}. Claims are measured lazily on a small
// deterministic sample; violations above 1e-6 produce warnings downstream,
// not failures.
class SphericalFunction {
public:
    using Evaluator = std::function<double(std::span<const double>)>;

    SphericalFunction(Evaluator evaluator, int n, bool claims_rtheta_invariant = true,
                      bool claims_even = true);

    double operator()(std::span<const double> x) const { return impl_->evaluator(x); }
    int n() const { return impl_->n; }
    bool claims_rtheta_invariant() const { return impl_->invariant; }
    bool claims_even() const { return impl_->even; }

    // max sampled violation of the claimed symmetries (cached).
    double measured_claim_deviation() const;

private:
    struct Impl {
        Evaluator evaluator;
        int n;
        bool invariant;
        bool even;
        mutable std::once_flag measured;
        mutable double deviation = 0.0;
    };
    std::shared_ptr<Impl> impl_;
};

using WarningList = std::vector<std::string>;

// Integral of f over S^{2n-1} cap H_xi via the subsphere rule.
double radon_complex(const SphericalFunction& f, const UnitDirection& xi, int level,
                     WarningList* warnings = nullptr);

// Fourier transform at xi of the degree -(2n-2) homogeneous extension of f,
// i.e. 2 pi times the Radon transform.
double ft_homogeneous_2n2(const SphericalFunction& f, const UnitDirection& xi, int level,
                          WarningList* warnings = nullptr);

enum class SectionMethod { analytic, montecarlo };

// True when a closed-form parallel section function is available for this
// body/direction pair (balls for any direction; the hyperbola/slab body for
// directions in its distinguished coordinate plane).
bool analytic_section_supported(const StarBody& K, const UnitDirection& xi);

// A_{K,H_xi}(u) = Vol_{2n-2}(K cap {H_xi + u_1 xi + u_2 xi_perp}).
double parallel_section(const StarBody& K, const UnitDirection& xi, std::array<double, 2> u,
                        SectionMethod method, std::size_t samples = 0, std::uint64_t seed = 0);

struct LaplacianEstimate {
    double value = 0.0;       // Lap A(0)
    double plain_h = 0.0;     // 4 (A(h) - A(0)) / h^2
    double plain_half = 0.0;  // same with step h/2
    double std_error = 0.0;   // Monte Carlo sampling error of value
    double fd_truncation = 0.0;
    double rounding_floor = 0.0;
    double error_estimate = 0.0; // std_error + fd_truncation + rounding_floor
};

// Monte Carlo evaluations share one direction stream across the offsets
// (common random numbers), which is what makes the finite difference usable
// at realistic sample counts.
LaplacianEstimate laplacian_A_at_zero(const StarBody& K, const UnitDirection& xi, double h,
                                      SectionMethod method, bool richardson,
                                      std::size_t samples = 0, std::uint64_t seed = 0);

struct FtConfig {
    int level = 0; // 0 -> default_level(n)
    SectionMethod method = SectionMethod::analytic;
    double h = 1e-2;
    bool richardson = true;
    std::size_t samples = 200'000;
    std::uint64_t seed = 1;
};

struct FtValue {
    double value = 0.0;
    double error_estimate = 0.0;
    double std_error = 0.0;
};

// (||x||_K^{-2})^\wedge(xi) on the unit sphere; n=2 via the central slice
// area, n=3 via the Laplacian identity.
FtValue ft_norm_minus2(const StarBody& K, const UnitDirection& xi, const FtConfig& cfg = {});

// Relative residual |LHS - RHS| / |RHS| of the Parseval identity for the
// pair of degree -2 extensions of rho_K^2 and rho_L^2 in R^4.
double parseval_check(const StarBody& K, const StarBody& L, int level);

} // namespace cxhyp
