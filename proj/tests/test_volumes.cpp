#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cxhyp/bodies.hpp"
#include "cxhyp/detail/adaptive_quad.hpp"
#include "cxhyp/hyperbolic_volume.hpp"
#include "cxhyp/quadrature.hpp"
#include "cxhyp/rng.hpp"
#include "cxhyp/transforms.hpp"
#include "cxhyp/vec.hpp"

using namespace cxhyp;

namespace {

constexpr double kPi = std::numbers::pi;

UnitDirection axis(int dim, int k) {
    std::vector<double> c(dim, 0.0);
    c[k] = 1.0;
    return UnitDirection(std::move(c));
}

} // namespace

TEST_CASE("hyperbolic volume of balls") {
    const double hv = hvol(make_ball(0.5, 2), 32).value;
    CHECK(hv == doctest::Approx(32 * kPi * kPi / 9).epsilon(1e-12));

    // cross-check against direct adaptive quadrature of the volume density
    const double radial_part = detail::adaptive_simpson(
        [](double r) { return r * r * r / std::pow(1 - r * r, 3); }, 0.0, 0.5, 1e-16);
    CHECK(hv == doctest::Approx(64.0 * 2 * kPi * kPi * radial_part).epsilon(1e-12));

    // one-complex-dimension closed form 8 pi rho^2/(1-rho^2)
    for (double rho : {0.2, 0.6}) {
        const double expected = 8 * kPi * rho * rho / (1 - rho * rho);
        CHECK(hvol(make_ball(rho, 1), 8).value == doctest::Approx(expected).epsilon(1e-12));
    }

    // monotone under inclusion
    CHECK(hvol(make_ball(0.3, 2), 16).value < hvol(make_ball(0.5, 2), 16).value);
    const StarBody small = make_complex_ellipsoid({0.5, 0.3});
    const StarBody big = make_complex_ellipsoid({0.55, 0.35});
    CHECK(hvol(small, 16).value < hvol(big, 16).value);

    CHECK_THROWS_AS(hvol(make_counterexample_M(1.2, 1.1), 8), SingularityError);
}

TEST_CASE("Euclidean volume") {
    CHECK(evol(make_ball(0.5, 2), 16).value == doctest::Approx(kPi * kPi / 32).epsilon(1e-12));
    CHECK(evol(make_ball(1.0 - 1e-9, 2), 16).value ==
          doctest::Approx(kPi * kPi / 2).epsilon(1e-6));

    // dilation scales volume by alpha^{2n}
    const StarBody E = make_complex_ellipsoid({0.6, 0.35});
    const double v1 = evol(E, 16).value;
    const double v2 = evol(dilate(E, 0.5), 16).value;
    CHECK(v2 == doctest::Approx(v1 / 16.0).epsilon(1e-12));
}

TEST_CASE("hyperbolic section volumes of balls") {
    CHECK(hvol_section(make_ball(0.5, 2), axis(4, 0), 16).value ==
          doctest::Approx(8 * kPi / 3).epsilon(1e-12));
    CHECK(hvol_section(make_ball(0.5, 3), axis(6, 4), 12).value ==
          doctest::Approx(32 * kPi * kPi / 9).epsilon(1e-12));

    // rotational symmetry: constant across any direction grid
    Xoshiro256pp rng(41);
    const StarBody B = make_ball(0.37, 2);
    const double ref = hvol_section(B, axis(4, 0), 16).value;
    for (int i = 0; i < 8; ++i) {
        std::vector<double> g(4);
        rng.fill_gaussian(g);
        vec::scale(g, 1.0 / vec::norm(g));
        CHECK(hvol_section(B, UnitDirection(g), 16).value ==
              doctest::Approx(ref).epsilon(1e-12));
    }

    CHECK_THROWS_AS(hvol_section(make_ball(0.5, 1), UnitDirection(std::vector<double>{1, 0}), 8),
                    PreconditionError);
}

TEST_CASE("section volume equals the Radon transform of the radial kernel") {
    const StarBody K = make_complex_ellipsoid({0.6, 0.35});
    const int n = K.n();
    const SphericalFunction g(
        [K, n](std::span<const double> x) { return radial_hyp_integral(K.radial(x), n - 1); },
        n, true, true);
    Xoshiro256pp rng(42);
    for (int i = 0; i < 5; ++i) {
        std::vector<double> d(4);
        rng.fill_gaussian(d);
        vec::scale(d, 1.0 / vec::norm(d));
        const UnitDirection xi(d);
        const double via_radon = 8.0 * radon_complex(g, xi, 24);
        const double direct = hvol_section(K, xi, 24).value;
        CHECK(std::abs(via_radon - direct) <= 1e-12 * std::abs(direct));
    }
}

TEST_CASE("transform volume identity") {
    CHECK(transform_volume_identity(make_ball(0.5, 2), 16) <= 1e-12);
    CHECK(transform_volume_identity(make_counterexample_K(2.0, 2.0), 12) <= 1e-12);
    // residual is dilation invariant (identity holds for every body)
    CHECK(transform_volume_identity(make_ball(0.25, 2), 16) <= 1e-12);

    // the two sides really are the same number: spot check closed forms
    const double hv = hvol(make_ball(0.5, 2), 24).value;
    const double ev = 64.0 * evol(make_ball(1.0 / std::sqrt(3.0), 2), 24).value;
    CHECK(hv == doctest::Approx(ev).epsilon(1e-12));
}

TEST_CASE("hyperbolic volume dominates the flat one inside the ball") {
    for (const StarBody& K : {make_ball(0.55, 2), make_complex_ellipsoid({0.6, 0.35}),
                              make_counterexample_K(2.0, 2.0)}) {
        const double hv = hvol(K, 12).value;
        const double ev = std::pow(8.0, K.n()) * evol(K, 12).value;
        CHECK(hv >= ev);
    }
}

TEST_CASE("sandwich bounds") {
    const auto rep = sandwich_check(make_ball(0.3, 2), 0.3, 16, 4);
    CHECK(rep.ok);
    CHECK(rep.volume_ratio >= 1.0);
    CHECK(rep.volume_ratio <= 1.0 / std::pow(1 - 0.09, 3) + 1e-8);

    // flat limit: ratios tend to 1
    const auto flat = sandwich_check(make_ball(0.05, 2), 0.05, 16, 2);
    CHECK(flat.volume_ratio == doctest::Approx(1.0).epsilon(1e-2));

    const StarBody K = make_counterexample_K(2.0, 2.0);
    const auto cek = sandwich_check(K, K.sup_radial(), 8, 3);
    CHECK(cek.ok);

    CHECK_THROWS_AS(sandwich_check(make_ball(0.5, 2), 0.3, 8, 2), PreconditionError);
}

TEST_CASE("Monte Carlo hyperbolic sections match the quadrature route") {
    const StarBody K = make_counterexample_K(2.0, 2.0);
    const UnitDirection e5 = axis(6, 4);
    const VolumeResult quad = hvol_section(K, e5, 16);
    const McEstimate mc = mc_section_volume(K, section_frame(e5), {0, 0},
                                            SectionWeight::hyperbolic, 400'000, 71);
    CHECK(std::abs(quad.value - mc.value) <= 3 * mc.std_error + quad.error_estimate);
}
