#pragma once

// Star bodies in R^{2n} given by their radial function on the unit sphere,
// the parametric catalog (balls, complex ellipsoids, the cylinder/ellipsoid
// and hyperbola/slab pair in R^6), and body-to-body transforms.
//
// rho_K(xi) is the Euclidean distance from the origin to the boundary along
// a unit direction xi; the Minkowski functional of a general point is
// |x| / rho_K(x/|x|).

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cxhyp/geometry.hpp"

namespace cxhyp {

// Parameter tree describing a catalog body; composed kinds reference an
// inner spec. Serializes to/from the CLI's JSON config documents.
struct BodySpec {
    std::string kind; // ball | complex_ellipsoid | counterexample_K |
                      // counterexample_M | hyperbolic_transform | radial_perturbation
    std::map<std::string, double> params;
    std::shared_ptr<const BodySpec> of; // inner body for composed kinds
};

class StarBody {
public:
    using Radial = std::function<double(std::span<const double>)>;

    enum class SupQuality { exact, estimated };

    StarBody(Radial radial, int n, bool claims_rtheta_invariant,
             bool claims_unit_ball_contained, std::string label,
             double sup_radial, SupQuality sup_quality,
             std::shared_ptr<const BodySpec> spec = nullptr);

    double radial(std::span<const double> xi) const { return impl_->radial(xi); }
    double radial(const UnitDirection& xi) const { return impl_->radial(xi.coords()); }

    // |x| / rho(x/|x|); zero at the origin.
    double minkowski(std::span<const double> x) const;

    int n() const { return impl_->n; }
    int dim() const { return 2 * impl_->n; }
    bool claims_rtheta_invariant() const { return impl_->invariant; }
    bool claims_unit_ball_contained() const { return impl_->contained; }
    const std::string& label() const { return impl_->label; }
    double sup_radial() const { return impl_->sup; }
    SupQuality sup_quality() const { return impl_->sup_quality; }
    const std::shared_ptr<const BodySpec>& spec() const { return impl_->spec; }

    // Radius of a ball guaranteed to contain the body; used to certify
    // Monte Carlo bounding regions. Falls back to the unit ball when
    // containment is claimed, and to an inflated estimate otherwise.
    double certified_circumradius() const;

private:
    struct Impl {
        Radial radial;
        int n;
        bool invariant;
        bool contained;
        std::string label;
        double sup;
        SupQuality sup_quality;
        std::shared_ptr<const BodySpec> spec;
    };
    std::shared_ptr<const Impl> impl_;
};

// --- catalog -------------------------------------------------------------

StarBody make_ball(double rho, int n);

// {x : sum_k |z_k|^2 / axes_k^2 <= 1}; R_theta-invariant by construction.
StarBody make_complex_ellipsoid(std::vector<double> axes);

// Intersection of the cylinder |x_tilde| <= 1/a with the ellipsoid
// |x_tilde|^2 + (1+b^2)|x_3|^2 <= 1 in R^6 (x_tilde = first two complex
// coordinates, x_3 = the last one). Contained in the unit ball for b > 1.
StarBody make_counterexample_K(double a, double b);

// {x in R^6 : (a^2-1)|x_tilde|^2 - |x_3|^2 <= 1, |x_3| <= 1/b}; the image of
// counterexample_K under the radial map r -> sqrt(r^2/(1-r^2)).
StarBody make_counterexample_M(double a, double b);

// M with rho_M = sqrt(rho_K^2 / (1 - rho_K^2)). Requires sup rho_K <= 1-delta;
// evaluation throws SingularityError naming the direction otherwise.
// The R_theta-invariance claim is preserved, the containment claim dropped.
StarBody hyperbolic_transform(const StarBody& K, double delta = 1e-6);

// rho' = rho + epsilon on the unit sphere (boundary pushed outward).
StarBody radial_perturbation(const StarBody& K, double epsilon);

// rho' = alpha * rho.
StarBody dilate(const StarBody& K, double alpha);

// Custom body from a radial evaluator; claims are validated on a small
// deterministic sample unless validate is false. sup_hint, when given, is
// trusted as exact.
StarBody make_custom(StarBody::Radial radial, int n, bool claims_rtheta_invariant,
                     bool claims_unit_ball_contained, std::string label,
                     std::optional<double> sup_hint = std::nullopt, bool validate = true);

// max over sampled (xi, theta) of |rho(xi) - rho(R_theta xi)|; deterministic
// for a fixed seed.
double invariance_deviation(const StarBody& K, std::size_t samples, std::uint64_t seed);

// Factory for spec trees (used by the CLI config front end).
StarBody make_body(const BodySpec& spec);

std::vector<std::string> known_body_kinds();

} // namespace cxhyp
