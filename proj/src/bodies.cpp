#include "cxhyp/bodies.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "cxhyp/rng.hpp"
#include "cxhyp/vec.hpp"

namespace cxhyp {

namespace {

// Norms of the first (n-1) complex coordinates and the last one; the two
// block moduli the R^6 catalog bodies depend on.
struct BlockNorms {
    double tilde; // |x_tilde|, first 2n-2 coordinates
    double last;  // |x_n|, last coordinate pair
};

BlockNorms block_norms(std::span<const double> x) {
    double t2 = 0.0;
    for (std::size_t i = 0; i + 2 < x.size(); ++i) t2 += x[i] * x[i];
    const std::size_t m = x.size();
    const double l2 = x[m - 2] * x[m - 2] + x[m - 1] * x[m - 1];
    return {std::sqrt(t2), std::sqrt(l2)};
}

std::string format_direction(std::span<const double> xi) {
    std::ostringstream os;
    os.precision(6);
    os << "(";
    for (std::size_t i = 0; i < xi.size(); ++i) {
        if (i) os << ", ";
        os << xi[i];
    }
    os << ")";
    return os.str();
}

// Deterministic probe directions: coordinate axes, pair diagonals, then
// seeded pseudo-random unit vectors.
std::vector<std::vector<double>> probe_directions(int dim, std::size_t count) {
    std::vector<std::vector<double>> probes;
    probes.reserve(count + 4 * dim);
    for (int k = 0; k < dim; ++k) probes.push_back(vec::unit_axis(dim, k));
    for (int k = 0; k + 1 < dim; k += 2) {
        std::vector<double> d(dim, 0.0);
        d[k] = d[k + 1] = std::numbers::sqrt2 / 2.0;
        probes.push_back(d);
        d[k + 1] = -d[k + 1];
        probes.push_back(std::move(d));
    }
    Xoshiro256pp rng(0x5EEDC0DEULL);
    std::vector<double> g(dim);
    for (std::size_t i = 0; i < count; ++i) {
        rng.fill_gaussian(g);
        const double nrm = vec::norm(g);
        if (nrm < 1e-12) continue;
        std::vector<double> d(g);
        vec::scale(d, 1.0 / nrm);
        probes.push_back(std::move(d));
    }
    return probes;
}

double estimate_sup(const StarBody::Radial& radial, int n) {
    double sup = 0.0;
    for (const auto& d : probe_directions(2 * n, 4096)) sup = std::max(sup, radial(d));
    return sup;
}

} // namespace

StarBody::StarBody(Radial radial, int n, bool claims_rtheta_invariant,
                   bool claims_unit_ball_contained, std::string label,
                   double sup_radial, SupQuality sup_quality,
                   std::shared_ptr<const BodySpec> spec) {
    if (n < 1) throw PreconditionError("StarBody: complex dimension must be >= 1");
    if (!radial) throw PreconditionError("StarBody: missing radial evaluator");
    impl_ = std::make_shared<const Impl>(Impl{
        std::move(radial), n, claims_rtheta_invariant, claims_unit_ball_contained,
        std::move(label), sup_radial, sup_quality, std::move(spec)});
}

double StarBody::minkowski(std::span<const double> x) const {
    const double nrm = vec::norm(x);
    if (nrm < 1e-300) return 0.0;
    if (x.size() <= 16) {
        std::array<double, 16> unit{};
        const double inv = 1.0 / nrm;
        for (std::size_t i = 0; i < x.size(); ++i) unit[i] = x[i] * inv;
        return nrm / impl_->radial(std::span<const double>(unit.data(), x.size()));
    }
    std::vector<double> unit(x.begin(), x.end());
    vec::scale(unit, 1.0 / nrm);
    return nrm / impl_->radial(unit);
}

double StarBody::certified_circumradius() const {
    if (impl_->sup_quality == SupQuality::exact) return impl_->sup;
    if (impl_->contained) return std::min(1.0, impl_->sup * 1.05);
    return impl_->sup * 1.05;
}

StarBody make_ball(double rho, int n) {
    if (!(rho > 0.0 && rho < 1.0))
        throw PreconditionError("make_ball: rho must lie in (0,1)");
    auto spec = std::make_shared<BodySpec>();
    spec->kind = "ball";
    spec->params = {{"rho", rho}, {"n", static_cast<double>(n)}};
    std::ostringstream label;
    label << "ball(rho=" << rho << ",n=" << n << ")";
    return StarBody([rho](std::span<const double>) { return rho; }, n,
                    /*invariant=*/true, /*contained=*/true, label.str(), rho,
                    StarBody::SupQuality::exact, std::move(spec));
}

StarBody make_complex_ellipsoid(std::vector<double> axes) {
    if (axes.empty()) throw PreconditionError("make_complex_ellipsoid: no axes");
    for (double a : axes)
        if (!(a > 0.0)) throw PreconditionError("make_complex_ellipsoid: axes must be positive");
    const int n = static_cast<int>(axes.size());
    const double sup = *std::max_element(axes.begin(), axes.end());
    auto spec = std::make_shared<BodySpec>();
    spec->kind = "complex_ellipsoid";
    for (int k = 0; k < n; ++k) spec->params["a" + std::to_string(k + 1)] = axes[k];
    std::ostringstream label;
    label << "complex_ellipsoid(";
    for (int k = 0; k < n; ++k) label << (k ? "," : "") << axes[k];
    label << ")";
    auto radial = [axes](std::span<const double> xi) {
        double q = 0.0;
        for (std::size_t k = 0; k < axes.size(); ++k) {
            const double m2 = xi[2 * k] * xi[2 * k] + xi[2 * k + 1] * xi[2 * k + 1];
            q += m2 / (axes[k] * axes[k]);
        }
        return 1.0 / std::sqrt(q);
    };
    return StarBody(std::move(radial), n, true, sup < 1.0, label.str(), sup,
                    StarBody::SupQuality::exact, std::move(spec));
}

namespace {

void check_counterexample_params(double a, double b) {
    if (!(a > 1.0) || !(b > 1.0))
        throw PreconditionError("counterexample bodies require a > 1 and b > 1");
}

// sup rho over the sphere is attained where the two defining constraints
// meet; both catalog bodies peak at |x_tilde|^2 = (1+b^2)/(a^2+b^2).
double counterexample_K_sup(double a, double b) {
    return std::sqrt((a * a + b * b) / (a * a * (1.0 + b * b)));
}

double counterexample_M_sup(double a, double b) {
    return std::sqrt((a * a + b * b) / (b * b * (a * a - 1.0)));
}

} // namespace

StarBody make_counterexample_K(double a, double b) {
    check_counterexample_params(a, b);
    auto spec = std::make_shared<BodySpec>();
    spec->kind = "counterexample_K";
    spec->params = {{"a", a}, {"b", b}};
    std::ostringstream label;
    label << "counterexample-K(a=" << a << ",b=" << b << ")";
    auto radial = [a, b](std::span<const double> xi) {
        const auto [s, c] = block_norms(xi);
        // cylinder |x_tilde| <= 1/a and ellipsoid |x_tilde|^2+(1+b^2)|x_3|^2 <= 1,
        // both quadratic in the ray parameter.
        const double t_ell = 1.0 / std::sqrt(1.0 + b * b * c * c);
        if (s < 1e-300) return t_ell;
        return std::min(1.0 / (a * s), t_ell);
    };
    return StarBody(std::move(radial), 3, true, true, label.str(),
                    counterexample_K_sup(a, b), StarBody::SupQuality::exact,
                    std::move(spec));
}

StarBody make_counterexample_M(double a, double b) {
    check_counterexample_params(a, b);
    auto spec = std::make_shared<BodySpec>();
    spec->kind = "counterexample_M";
    spec->params = {{"a", a}, {"b", b}};
    std::ostringstream label;
    label << "counterexample-M(a=" << a << ",b=" << b << ")";
    const double sup = counterexample_M_sup(a, b);
    auto radial = [a, b](std::span<const double> xi) {
        const auto [s, c] = block_norms(xi);
        // hyperboloid sheet (a^2-1)|x_tilde|^2 - |x_3|^2 <= 1 binds only
        // when a|x_tilde| > 1; the slab |x_3| <= 1/b binds when c > 0.
        const double hyp = a * a * s * s - 1.0;
        double t = std::numeric_limits<double>::infinity();
        if (hyp > 0.0) t = 1.0 / std::sqrt(hyp);
        if (c > 1e-300) t = std::min(t, 1.0 / (b * c));
        return t;
    };
    return StarBody(std::move(radial), 3, true, sup < 1.0, label.str(), sup,
                    StarBody::SupQuality::exact, std::move(spec));
}

StarBody hyperbolic_transform(const StarBody& K, double delta) {
    if (!(delta > 0.0)) throw PreconditionError("hyperbolic_transform: delta must be positive");
    const double sup = K.sup_radial();
    if (sup > 1.0 - delta) {
        std::ostringstream msg;
        msg << "hyperbolic_transform: body '" << K.label() << "' has sup radial "
            << sup << " > 1 - delta (delta=" << delta << ")";
        throw SingularityError(msg.str());
    }
    const double sup_m = std::sqrt(sup * sup / (1.0 - sup * sup));

    // Recognize closed-form images so analytic section formulas stay
    // available downstream.
    std::shared_ptr<const BodySpec> out_spec;
    if (K.spec()) {
        if (K.spec()->kind == "ball") {
            auto s = std::make_shared<BodySpec>(*K.spec());
            s->params["rho"] = sup_m;
            out_spec = s;
        } else if (K.spec()->kind == "counterexample_K") {
            auto s = std::make_shared<BodySpec>(*K.spec());
            s->kind = "counterexample_M";
            out_spec = s;
        } else {
            auto s = std::make_shared<BodySpec>();
            s->kind = "hyperbolic_transform";
            s->params = {{"delta", delta}};
            s->of = K.spec();
            out_spec = s;
        }
    }

    auto radial = [K, delta](std::span<const double> xi) {
        const double r = K.radial(xi);
        if (r >= 1.0 - delta) {
            throw SingularityError("hyperbolic_transform: radial value " +
                                   std::to_string(r) + " too close to 1 at direction " +
                                   format_direction(xi));
        }
        return std::sqrt(r * r / (1.0 - r * r));
    };
    return StarBody(std::move(radial), K.n(), K.claims_rtheta_invariant(),
                    /*contained=*/false, "transform(" + K.label() + ")", sup_m,
                    K.sup_quality(), std::move(out_spec));
}

StarBody radial_perturbation(const StarBody& K, double epsilon) {
    if (!(epsilon >= 0.0)) throw PreconditionError("radial_perturbation: epsilon must be >= 0");
    const double sup = K.sup_radial() + epsilon;
    if (K.claims_unit_ball_contained() && sup >= 1.0) {
        throw ContainmentError("radial_perturbation: perturbed sup radial " +
                               std::to_string(sup) + " leaves the unit ball");
    }
    std::shared_ptr<const BodySpec> out_spec;
    if (K.spec()) {
        if (K.spec()->kind == "ball") {
            auto s = std::make_shared<BodySpec>(*K.spec());
            s->params["rho"] += epsilon;
            out_spec = s;
        } else {
            auto s = std::make_shared<BodySpec>();
            s->kind = "radial_perturbation";
            s->params = {{"epsilon", epsilon}};
            s->of = K.spec();
            out_spec = s;
        }
    }
    std::ostringstream label;
    label << "perturb(" << K.label() << ",eps=" << epsilon << ")";
    auto radial = [K, epsilon](std::span<const double> xi) { return K.radial(xi) + epsilon; };
    return StarBody(std::move(radial), K.n(), K.claims_rtheta_invariant(),
                    K.claims_unit_ball_contained(), label.str(), sup, K.sup_quality(),
                    std::move(out_spec));
}

StarBody dilate(const StarBody& K, double alpha) {
    if (!(alpha > 0.0)) throw PreconditionError("dilate: alpha must be positive");
    std::ostringstream label;
    label << "dilate(" << K.label() << "," << alpha << ")";
    auto radial = [K, alpha](std::span<const double> xi) { return alpha * K.radial(xi); };
    const double sup = alpha * K.sup_radial();
    return StarBody(std::move(radial), K.n(), K.claims_rtheta_invariant(),
                    K.claims_unit_ball_contained() && sup < 1.0, label.str(), sup,
                    K.sup_quality(), nullptr);
}

StarBody make_custom(StarBody::Radial radial, int n, bool claims_rtheta_invariant,
                     bool claims_unit_ball_contained, std::string label,
                     std::optional<double> sup_hint, bool validate) {
    double sup = sup_hint.value_or(0.0);
    if (!sup_hint) sup = estimate_sup(radial, n);
    StarBody body(std::move(radial), n, claims_rtheta_invariant, claims_unit_ball_contained,
                  std::move(label), sup,
                  sup_hint ? StarBody::SupQuality::exact : StarBody::SupQuality::estimated);
    if (validate) {
        for (const auto& d : probe_directions(2 * n, 64)) {
            if (!(body.radial(d) > 0.0))
                throw PreconditionError("make_custom: radial must be positive (body '" +
                                        body.label() + "')");
        }
        if (claims_rtheta_invariant && invariance_deviation(body, 256, 0x17A0000ULL) > 1e-8)
            throw PreconditionError("make_custom: R_theta-invariance claim violated");
        if (claims_unit_ball_contained && body.sup_radial() >= 1.0)
            throw ContainmentError("make_custom: containment claim violated");
    }
    return body;
}

double invariance_deviation(const StarBody& K, std::size_t samples, std::uint64_t seed) {
    if (samples < 1) throw PreconditionError("invariance_deviation: samples must be >= 1");
    const int dim = K.dim();
    double worst = 0.0;
    Xoshiro256pp rng(splitmix64(seed));
    std::vector<double> g(dim);
    for (std::size_t i = 0; i < samples; ++i) {
        rng.fill_gaussian(g);
        const double nrm = vec::norm(g);
        const double theta = rng.next_double() * 2.0 * std::numbers::pi;
        if (nrm < 1e-12) continue;
        std::vector<double> xi(g);
        vec::scale(xi, 1.0 / nrm);
        const auto rotated = rtheta_apply(std::span<const double>(xi), theta);
        worst = std::max(worst, std::abs(K.radial(xi) - K.radial(rotated)));
    }
    return worst;
}

StarBody make_body(const BodySpec& spec) {
    auto need = [&](const char* key) {
        auto it = spec.params.find(key);
        if (it == spec.params.end())
            throw PreconditionError("body spec '" + spec.kind + "' missing parameter '" +
                                    key + "'");
        return it->second;
    };
    if (spec.kind == "ball") {
        const int n = spec.params.count("n") ? static_cast<int>(need("n")) : 2;
        return make_ball(need("rho"), n);
    }
    if (spec.kind == "complex_ellipsoid") {
        std::vector<double> axes;
        for (int k = 1;; ++k) {
            auto it = spec.params.find("a" + std::to_string(k));
            if (it == spec.params.end()) break;
            axes.push_back(it->second);
        }
        return make_complex_ellipsoid(std::move(axes));
    }
    if (spec.kind == "counterexample_K") return make_counterexample_K(need("a"), need("b"));
    if (spec.kind == "counterexample_M") return make_counterexample_M(need("a"), need("b"));
    if (spec.kind == "hyperbolic_transform") {
        if (!spec.of) throw PreconditionError("hyperbolic_transform spec needs an inner body");
        const double delta =
            spec.params.count("delta") ? spec.params.at("delta") : 1e-6;
        return hyperbolic_transform(make_body(*spec.of), delta);
    }
    if (spec.kind == "radial_perturbation") {
        if (!spec.of) throw PreconditionError("radial_perturbation spec needs an inner body");
        return radial_perturbation(make_body(*spec.of), need("epsilon"));
    }
    throw PreconditionError("unknown body kind '" + spec.kind + "'; valid kinds: ball, "
                            "complex_ellipsoid, counterexample_K, counterexample_M, "
                            "hyperbolic_transform, radial_perturbation");
}

std::vector<std::string> known_body_kinds() {
    return {"ball", "complex_ellipsoid", "counterexample_K", "counterexample_M",
            "hyperbolic_transform", "radial_perturbation"};
}

} // namespace cxhyp
