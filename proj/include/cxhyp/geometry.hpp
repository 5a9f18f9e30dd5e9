#pragma once

// Coordinate conventions for C^n viewed as R^{2n}, the coordinate-pair
// rotation R_theta, and orthonormal frames adapted to complex hyperplanes.
//
// C^n is identified with R^{2n} by interleaving real and imaginary parts:
//   (x_11 + i x_12, ..., x_n1 + i x_n2) <-> (x_11, x_12, ..., x_n1, x_n2).
// Under this identification the complex hyperplane H_xi orthogonal to a unit
// vector xi is the (2n-2)-dimensional real subspace orthogonal to both
//   xi  and  xi_perp = (-xi_12, xi_11, ..., -xi_n2, xi_n1),
// and R_theta rotates every coordinate pair simultaneously by theta.

#include <complex>
#include <span>
#include <vector>

#include "cxhyp/errors.hpp"

namespace cxhyp {

inline constexpr double kFrameOrthoTol = 1e-12;

// Point of R^{2n} in interleaved (Re, Im) layout.
struct RealPoint {
    std::vector<double> coords;
    int n = 0; // complex dimension; coords.size() == 2n

    RealPoint() = default;
    RealPoint(std::vector<double> c);
};

// A vector constrained to the unit sphere S^{2n-1}. Inputs whose norm is off
// by more than `tolerance` are normalized and flagged; the zero vector is
// rejected.
class UnitDirection {
public:
    static constexpr double kDefaultTol = 1e-9;

    explicit UnitDirection(std::vector<double> coords, double tolerance = kDefaultTol);

    std::span<const double> coords() const { return coords_; }
    double operator[](std::size_t i) const { return coords_[i]; }
    std::size_t dim() const { return coords_.size(); }
    int ncomplex() const { return static_cast<int>(coords_.size() / 2); }
    double tolerance() const { return tolerance_; }
    bool was_normalized() const { return was_normalized_; }

private:
    std::vector<double> coords_;
    double tolerance_;
    bool was_normalized_ = false;
};

// Orthonormal frame {xi, xi_perp, basis...} of R^{2n}; basis spans the
// complex hyperplane H_xi.
struct SectionFrame {
    UnitDirection xi;
    UnitDirection xi_perp;
    std::vector<std::vector<double>> basis; // 2n-2 vectors of length 2n

    std::size_t dim() const { return xi.dim(); }
    int ncomplex() const { return xi.ncomplex(); }
};

RealPoint complex_to_real(std::span<const std::complex<double>> z);
std::vector<std::complex<double>> real_to_complex(const RealPoint& x);

// Simultaneous rotation of every coordinate pair by theta. Quarter turns and
// half turns come out exact (sin/cos values below 1e-15 are snapped to zero).
std::vector<double> rtheta_apply(std::span<const double> x, double theta);
RealPoint rtheta_apply(const RealPoint& x, double theta);

// The pairwise (-x_k2, x_k1) companion; equals rtheta_apply(x, pi/2).
std::vector<double> xi_perp_of(std::span<const double> x);

// Deterministic frame completion: Gram-Schmidt over the standard basis in
// index order, skipping candidates whose residual is below 1e-8.
SectionFrame section_frame(const UnitDirection& xi);

// Hermitian inner product sum_k z_k conj(w_k) of two interleaved vectors.
std::complex<double> hermitian_inner(std::span<const double> a, std::span<const double> b);

// min over theta of |a - R_theta b| = sqrt(2 - 2 |<a,b>_C|) for unit a, b.
double orbit_distance(std::span<const double> a, std::span<const double> b);

} // namespace cxhyp
