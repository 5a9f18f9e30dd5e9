#include "cxhyp/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>

#include "cxhyp/parallel.hpp"
#include "cxhyp/rng.hpp"
#include "cxhyp/vec.hpp"

namespace cxhyp {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kClaimWarnThreshold = 1e-6;

} // namespace

SphericalFunction::SphericalFunction(Evaluator evaluator, int n, bool claims_rtheta_invariant,
                                     bool claims_even) {
    if (!evaluator) throw PreconditionError("SphericalFunction: missing evaluator");
    if (n < 1) throw PreconditionError("SphericalFunction: complex dimension must be >= 1");
    auto impl = std::make_shared<Impl>();
    impl->evaluator = std::move(evaluator);
    impl->n = n;
    impl->invariant = claims_rtheta_invariant;
    impl->even = claims_even;
    impl_ = std::move(impl);
}

double SphericalFunction::measured_claim_deviation() const {
    std::call_once(impl_->measured, [this] {
        const int dim = 2 * impl_->n;
        Xoshiro256pp rng(0xC1A1135ULL);
        std::vector<double> g(dim);
        double worst = 0.0;
        for (int i = 0; i < 64; ++i) {
            rng.fill_gaussian(g);
            const double nrm = vec::norm(g);
            if (nrm < 1e-12) continue;
            std::vector<double> x(g);
            vec::scale(x, 1.0 / nrm);
            const double fx = impl_->evaluator(x);
            if (impl_->even) {
                std::vector<double> neg(x);
                vec::scale(neg, -1.0);
                worst = std::max(worst, std::abs(fx - impl_->evaluator(neg)));
            }
            if (impl_->invariant) {
                const double theta = rng.next_double() * 2.0 * kPi;
                const auto rot = rtheta_apply(std::span<const double>(x), theta);
                worst = std::max(worst, std::abs(fx - impl_->evaluator(rot)));
            }
        }
        impl_->deviation = worst;
    });
    return impl_->deviation;
}

double radon_complex(const SphericalFunction& f, const UnitDirection& xi, int level,
                     WarningList* warnings) {
    if (f.n() != xi.ncomplex())
        throw PreconditionError("radon_complex: function/direction dimension mismatch");
    if (f.n() < 2) throw PreconditionError("radon_complex: requires complex dimension >= 2");
    if (level <= 0) level = default_level(f.n());
    if ((f.claims_even() || f.claims_rtheta_invariant()) &&
        f.measured_claim_deviation() > kClaimWarnThreshold && warnings) {
        std::ostringstream msg;
        msg << "radon_complex: claimed symmetry violated by "
            << f.measured_claim_deviation() << " on sampled directions";
        warnings->push_back(msg.str());
    }
    const SectionFrame frame = section_frame(xi);
    const SphereRule rule = subsphere_rule(frame, level);
    return integrate_rule(rule, [&f](std::span<const double> x) { return f(x); });
}

double ft_homogeneous_2n2(const SphericalFunction& f, const UnitDirection& xi, int level,
                          WarningList* warnings) {
    return 2.0 * kPi * radon_complex(f, xi, level, warnings);
}

namespace {

bool direction_in_last_block(const UnitDirection& xi) {
    const auto c = xi.coords();
    for (std::size_t i = 0; i + 2 < c.size(); ++i)
        if (std::abs(c[i]) > 1e-12) return false;
    return true;
}

struct CemParams {
    double a, b;
};

// Closed-form A for the hyperbola/slab body with the direction in its
// distinguished coordinate plane: the slice at offset u is a 4-ball of
// radius h(|u|), h(y)^2 = (1+y^2)/(a^2-1), empty beyond |u| = 1/b.
double cem_section(const CemParams& p, double u_norm2) {
    if (u_norm2 > 1.0 / (p.b * p.b) * (1.0 + 1e-14)) return 0.0;
    const double h2 = (1.0 + u_norm2) / (p.a * p.a - 1.0);
    return 0.5 * kPi * kPi * h2 * h2;
}

} // namespace

bool analytic_section_supported(const StarBody& K, const UnitDirection& xi) {
    if (K.n() < 2 || !K.spec()) return false;
    if (K.spec()->kind == "ball") return true;
    if (K.spec()->kind == "counterexample_M")
        return K.n() == 3 && direction_in_last_block(xi);
    return false;
}

double parallel_section(const StarBody& K, const UnitDirection& xi, std::array<double, 2> u,
                        SectionMethod method, std::size_t samples, std::uint64_t seed) {
    const int n = K.n();
    if (n < 2) throw PreconditionError("parallel_section: requires complex dimension >= 2");
    if (xi.ncomplex() != n)
        throw PreconditionError("parallel_section: direction dimension mismatch");
    const double u2 = u[0] * u[0] + u[1] * u[1];

    if (method == SectionMethod::analytic) {
        if (!analytic_section_supported(K, xi))
            throw PreconditionError(
                "parallel_section: no analytic formula for body '" + K.label() +
                "' at this direction (supported: ball for any direction, counterexample_M "
                "for directions in its distinguished coordinate plane)");
        const auto& spec = *K.spec();
        if (spec.kind == "ball") {
            const double rho = spec.params.at("rho");
            const double q = rho * rho - u2;
            if (q <= 0.0) return 0.0;
            double p = 1.0;
            for (int k = 0; k < n - 1; ++k) p *= q;
            return ball_volume(2 * n - 2, 1.0) * p;
        }
        return cem_section({spec.params.at("a"), spec.params.at("b")}, u2);
    }

    if (samples == 0) samples = 200'000;
    const SectionFrame frame = section_frame(xi);
    return mc_section_volume(K, frame, u, SectionWeight::euclidean, samples, seed).value;
}

namespace {

struct FdCombine {
    double value, plain_h, plain_half, truncation;
};

FdCombine fd_combine(double a0, double ah, double ahalf, double h, bool richardson) {
    const double plain_h = 4.0 * (ah - a0) / (h * h);
    const double plain_half = 16.0 * (ahalf - a0) / (h * h);
    const double value = richardson ? (4.0 * plain_half - plain_h) / 3.0 : plain_h;
    const double diff = std::abs(plain_h - plain_half);
    const double truncation = richardson ? diff / 3.0 : diff * (4.0 / 3.0);
    return {value, plain_h, plain_half, truncation};
}

double fd_rounding_floor(double a_scale, double h) {
    const double eps = std::numeric_limits<double>::epsilon();
    return 64.0 * eps * std::max(a_scale, 1e-3) / (h * h / 4.0);
}

} // namespace

LaplacianEstimate laplacian_A_at_zero(const StarBody& K, const UnitDirection& xi, double h,
                                      SectionMethod method, bool richardson,
                                      std::size_t samples, std::uint64_t seed) {
    if (!(h > 0.0)) throw PreconditionError("laplacian_A_at_zero: h must be positive");
    if (!K.claims_rtheta_invariant())
        throw PreconditionError(
            "laplacian_A_at_zero: radial section profile requires an R_theta-invariant body");
    const int n = K.n();
    if (n < 2) throw PreconditionError("laplacian_A_at_zero: requires complex dimension >= 2");

    LaplacianEstimate out;
    if (method == SectionMethod::analytic) {
        const double a0 = parallel_section(K, xi, {0.0, 0.0}, SectionMethod::analytic);
        const double ahalf = parallel_section(K, xi, {h / 2.0, 0.0}, SectionMethod::analytic);
        const double ah = parallel_section(K, xi, {h, 0.0}, SectionMethod::analytic);
        const auto fd = fd_combine(a0, ah, ahalf, h, richardson);
        out.value = fd.value;
        out.plain_h = fd.plain_h;
        out.plain_half = fd.plain_half;
        out.fd_truncation = fd.truncation;
        out.rounding_floor = fd_rounding_floor(std::abs(a0), h);
        out.error_estimate = out.fd_truncation + out.rounding_floor;
        return out;
    }

    if (samples == 0) samples = 200'000;
    const SectionFrame frame = section_frame(xi);
    const int d_sub = 2 * n - 2;
    const double shell = sphere_surface(2 * n - 3) / static_cast<double>(d_sub);
    const double cert = K.certified_circumradius();

    // Three parallel slices share one direction stream; each sample yields a
    // correlated finite-difference value whose sample variance is the honest
    // error of the estimator.
    const std::array<std::array<double, 2>, 3> offsets = {{{0.0, 0.0}, {h / 2.0, 0.0}, {h, 0.0}}};
    std::array<std::vector<double>, 3> origins;
    std::array<double, 3> hi_start{};
    std::array<bool, 3> inside{};
    for (int k = 0; k < 3; ++k) {
        std::vector<double> u0(frame.dim(), 0.0);
        for (std::size_t j = 0; j < frame.dim(); ++j)
            u0[j] = offsets[k][0] * frame.xi[j] + offsets[k][1] * frame.xi_perp[j];
        inside[k] = K.minkowski(u0) < 1.0;
        const double off2 = offsets[k][0] * offsets[k][0];
        hi_start[k] = std::sqrt(std::max(cert * cert - off2, 0.0)) * (1.0 + 1e-9) + 1e-12;
        origins[k] = std::move(u0);
    }

    constexpr std::size_t kChunk = 1 << 12;
    const std::size_t chunks = (samples + kChunk - 1) / kChunk;
    std::vector<double> sum_val(chunks, 0.0), sum_val2(chunks, 0.0);
    std::vector<double> sum_h(chunks, 0.0), sum_half(chunks, 0.0);

    parallel_chunks(chunks, [&](std::size_t c) {
        auto rng = Xoshiro256pp::for_chunk(seed, c);
        const std::size_t lo = c * kChunk;
        const std::size_t hi = std::min(lo + kChunk, samples);
        std::vector<double> g(static_cast<std::size_t>(d_sub));
        std::vector<double> w(frame.dim());
        double acc = 0.0, acc2 = 0.0, acc_h = 0.0, acc_half = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            rng.fill_gaussian(g);
            const double gn = vec::norm(g);
            if (gn >= 1e-12) vec::scale(g, 1.0 / gn);
            else { std::fill(g.begin(), g.end(), 0.0); g[0] = 1.0; }
            std::fill(w.begin(), w.end(), 0.0);
            for (std::size_t k = 0; k < frame.basis.size(); ++k) {
                const double gk = g[k];
                const auto& bk = frame.basis[k];
                for (std::size_t j = 0; j < w.size(); ++j) w[j] += gk * bk[j];
            }
            std::array<double, 3> a{};
            for (int k = 0; k < 3; ++k) {
                if (!inside[k]) continue;
                const double t = ray_boundary_hit(K, origins[k], w, hi_start[k]);
                double p = 1.0;
                for (int q = 0; q < d_sub; ++q) p *= t;
                a[k] = shell * p;
            }
            const auto fd = fd_combine(a[0], a[2], a[1], h, richardson);
            acc += fd.value;
            acc2 += fd.value * fd.value;
            acc_h += fd.plain_h;
            acc_half += fd.plain_half;
        }
        sum_val[c] = acc;
        sum_val2[c] = acc2;
        sum_h[c] = acc_h;
        sum_half[c] = acc_half;
    });

    double tv = 0.0, tv2 = 0.0, th = 0.0, thalf = 0.0;
    for (std::size_t c = 0; c < chunks; ++c) {
        tv += sum_val[c];
        tv2 += sum_val2[c];
        th += sum_h[c];
        thalf += sum_half[c];
    }
    const double inv = 1.0 / static_cast<double>(samples);
    out.value = tv * inv;
    out.plain_h = th * inv;
    out.plain_half = thalf * inv;
    const double var = std::max(0.0, tv2 * inv - out.value * out.value);
    out.std_error = std::sqrt(var * inv);
    const double diff = std::abs(out.plain_h - out.plain_half);
    out.fd_truncation = richardson ? diff / 3.0 : diff * (4.0 / 3.0);
    out.rounding_floor = fd_rounding_floor(std::abs(shell), h);
    out.error_estimate = out.std_error + out.fd_truncation + out.rounding_floor;
    return out;
}

FtValue ft_norm_minus2(const StarBody& K, const UnitDirection& xi, const FtConfig& cfg) {
    const int n = K.n();
    if (n != 2 && n != 3)
        throw PreconditionError("ft_norm_minus2: implemented for complex dimensions 2 and 3");
    if (xi.ncomplex() != n)
        throw PreconditionError("ft_norm_minus2: direction dimension mismatch");
    const int level = cfg.level > 0 ? cfg.level : default_level(n);

    FtValue out;
    if (n == 2) {
        // 4 pi A(0) with the central slice area from the polar integral
        // A(0) = (1/2) int_{S^3 cap H_xi} rho^2.
        const SectionFrame frame = section_frame(xi);
        auto slice_area = [&](int lvl) {
            const SphereRule rule = subsphere_rule(frame, lvl);
            return 0.5 * integrate_rule(rule, [&](std::span<const double> x) {
                const double r = K.radial(x);
                return r * r;
            });
        };
        const double a0 = slice_area(level);
        const double a0_coarse = slice_area(std::max(level / 2, 2));
        out.value = 4.0 * kPi * a0;
        out.error_estimate = 4.0 * kPi * (std::abs(a0 - a0_coarse) + 1e-14 * std::abs(a0));
        return out;
    }

    const auto lap =
        laplacian_A_at_zero(K, xi, cfg.h, cfg.method, cfg.richardson, cfg.samples, cfg.seed);
    out.value = -4.0 * kPi * lap.value;
    out.error_estimate = 4.0 * kPi * lap.error_estimate;
    out.std_error = 4.0 * kPi * lap.std_error;
    return out;
}

double parseval_check(const StarBody& K, const StarBody& L, int level) {
    if (K.n() != 2 || L.n() != 2)
        throw PreconditionError("parseval_check: implemented for complex dimension 2");
    if (level <= 0) level = default_level(2);

    const SphericalFunction fK(
        [K](std::span<const double> x) { const double r = K.radial(x); return r * r; }, 2,
        K.claims_rtheta_invariant(), true);
    const SphericalFunction fL(
        [L](std::span<const double> x) { const double r = L.radial(x); return r * r; }, 2,
        L.claims_rtheta_invariant(), true);

    const bool reduced = K.claims_rtheta_invariant() && L.claims_rtheta_invariant();
    const ProductSphereRule outer(2, level, reduced);

    constexpr std::size_t kChunk = 256;
    const std::size_t chunks = (outer.size() + kChunk - 1) / kChunk;
    std::vector<double> lhs_part(chunks, 0.0), rhs_part(chunks, 0.0);
    parallel_chunks(chunks, [&](std::size_t c) {
        const std::size_t lo = c * kChunk;
        const std::size_t hi = std::min(lo + kChunk, outer.size());
        std::array<double, 4> buf{};
        double lhs = 0.0, rhs = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            const double w = outer.node(i, buf);
            const UnitDirection theta(std::vector<double>(buf.begin(), buf.end()));
            const double ftK = ft_homogeneous_2n2(fK, theta, level);
            const double ftL = ft_homogeneous_2n2(fL, theta, level);
            lhs += w * ftK * ftL;
            rhs += w * fK(buf) * fL(buf);
        }
        lhs_part[c] = lhs;
        rhs_part[c] = rhs;
    });
    double lhs = 0.0, rhs = 0.0;
    for (std::size_t c = 0; c < chunks; ++c) {
        lhs += lhs_part[c];
        rhs += rhs_part[c];
    }
    rhs *= std::pow(2.0 * kPi, 4);
    return std::abs(lhs - rhs) / std::abs(rhs);
}

} // namespace cxhyp
