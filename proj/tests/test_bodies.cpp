#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cxhyp/bodies.hpp"
#include "cxhyp/rng.hpp"
#include "cxhyp/vec.hpp"

using namespace cxhyp;

namespace {

UnitDirection random_direction(Xoshiro256pp& rng, int dim) {
    std::vector<double> g(dim);
    rng.fill_gaussian(g);
    vec::scale(g, 1.0 / vec::norm(g));
    return UnitDirection(std::move(g));
}

} // namespace

TEST_CASE("ball basics") {
    const StarBody B = make_ball(0.5, 2);
    Xoshiro256pp rng(11);
    for (int i = 0; i < 10; ++i) CHECK(B.radial(random_direction(rng, 4)) == 0.5);
    CHECK(B.claims_rtheta_invariant());
    CHECK(B.claims_unit_ball_contained());
    CHECK(invariance_deviation(B, 100, 1) == 0.0);
    CHECK_THROWS_AS(make_ball(1.2, 2), PreconditionError);
    CHECK_THROWS_AS(make_ball(0.0, 2), PreconditionError);
}

TEST_CASE("hyperbolic transform of a ball is the closed-form ball") {
    const double rho = 0.5;
    const StarBody M = hyperbolic_transform(make_ball(rho, 2));
    const double expected = std::sqrt(rho * rho / (1 - rho * rho));
    Xoshiro256pp rng(12);
    for (int i = 0; i < 20; ++i)
        CHECK(M.radial(random_direction(rng, 4)) == doctest::Approx(expected).epsilon(1e-14));
    CHECK(M.spec()->kind == "ball");
    CHECK(!M.claims_unit_ball_contained());
    CHECK(M.claims_rtheta_invariant());

    // fixed points of the radial map
    const StarBody M2 = hyperbolic_transform(make_ball(1.0 / std::numbers::sqrt2, 2));
    CHECK(M2.radial(UnitDirection(std::vector<double>{1, 0, 0, 0})) ==
          doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("counterexample_K block radials") {
    const double a = 2.0, b = 2.0;
    const StarBody K = make_counterexample_K(a, b);
    const UnitDirection third(std::vector<double>{0, 0, 0, 0, 1, 0});
    CHECK(K.radial(third) == doctest::Approx(1.0 / std::sqrt(1 + b * b)).epsilon(1e-14));
    const UnitDirection tilde(std::vector<double>{1, 0, 0, 0, 0, 0});
    CHECK(K.radial(tilde) == doctest::Approx(1.0 / a).epsilon(1e-14));
    CHECK(K.claims_unit_ball_contained());
    CHECK(invariance_deviation(K, 1000, 7) <= 1e-12);
    CHECK_THROWS_AS(make_counterexample_K(1.0, 2.0), PreconditionError);
    CHECK_THROWS_AS(make_counterexample_K(2.0, 0.5), PreconditionError);
}

TEST_CASE("counterexample_M block radials and the transform image property") {
    const double a = 2.0, b = 2.0;
    const StarBody M = make_counterexample_M(a, b);
    const UnitDirection tilde(std::vector<double>{0, 1, 0, 0, 0, 0});
    CHECK(M.radial(tilde) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
    const UnitDirection third(std::vector<double>{0, 0, 0, 0, 0, 1});
    CHECK(M.radial(third) == doctest::Approx(1.0 / b).epsilon(1e-14));
    CHECK(invariance_deviation(M, 1000, 8) <= 1e-12);

    const StarBody image = hyperbolic_transform(make_counterexample_K(a, b));
    CHECK(image.spec()->kind == "counterexample_M");
    Xoshiro256pp rng(13);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const auto xi = random_direction(rng, 6);
        worst = std::max(worst, std::abs(M.radial(xi) - image.radial(xi)));
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("counterexample_K radial is continuous across the seam") {
    const StarBody K = make_counterexample_K(2.0, 2.0);
    // seam at |x_tilde|^2 = (1+b^2)/(a^2+b^2) = 5/8
    const double s = std::sqrt(5.0 / 8.0);
    double prev = 0.0;
    bool first = true;
    for (double ds = -1e-3; ds <= 1e-3; ds += 1e-5) {
        const double st = s + ds;
        const double ct = std::sqrt(1 - st * st);
        const UnitDirection xi(std::vector<double>{st, 0, 0, 0, ct, 0});
        const double r = K.radial(xi);
        if (!first) CHECK(std::abs(r - prev) <= 2e-5);
        prev = r;
        first = false;
    }
}

TEST_CASE("hyperbolic transform guards and monotonicity") {
    CHECK(hyperbolic_transform(make_ball(0.5, 2)).radial(
              UnitDirection(std::vector<double>{1, 0, 0, 0})) ==
          doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
    CHECK_THROWS_AS(hyperbolic_transform(make_ball(1.0 - 1e-8, 2)), SingularityError);

    // pointwise monotone in rho
    Xoshiro256pp rng(14);
    for (int i = 0; i < 200; ++i) {
        const double r1 = 0.05 + 0.85 * rng.next_double();
        const double r2 = 0.05 + 0.85 * rng.next_double();
        if (r1 == r2) continue;
        const double m1 = std::sqrt(r1 * r1 / (1 - r1 * r1));
        const double m2 = std::sqrt(r2 * r2 / (1 - r2 * r2));
        CHECK(((r1 < r2) == (m1 < m2)));
    }

    // double transform inverse recovers the body
    const StarBody K = make_complex_ellipsoid({0.6, 0.35});
    const StarBody M = hyperbolic_transform(K);
    for (int i = 0; i < 100; ++i) {
        const auto xi = random_direction(rng, 4);
        const double rm = M.radial(xi);
        const double recovered = std::sqrt(rm * rm / (1 + rm * rm));
        CHECK(std::abs(recovered - K.radial(xi)) <= 1e-12);
    }
}

TEST_CASE("radial perturbation") {
    const StarBody B = make_ball(0.5, 2);
    const StarBody P = radial_perturbation(B, 0.1);
    Xoshiro256pp rng(15);
    for (int i = 0; i < 20; ++i)
        CHECK(P.radial(random_direction(rng, 4)) == doctest::Approx(0.6).epsilon(1e-15));
    const StarBody same = radial_perturbation(B, 0.0);
    for (int i = 0; i < 20; ++i) {
        const auto xi = random_direction(rng, 4);
        CHECK(same.radial(xi) == B.radial(xi));
        CHECK(radial_perturbation(B, 0.01).radial(xi) > B.radial(xi));
    }
    CHECK_THROWS_AS(radial_perturbation(make_ball(0.95, 2), 0.06), ContainmentError);
}

TEST_CASE("invariance deviation flags a skewed ellipsoid") {
    // axis-aligned Euclidean ellipsoid with unequal semi-axes inside one
    // complex pair: rotating by pi/2 swaps them.
    auto radial = [](std::span<const double> x) {
        const double q = x[0] * x[0] / 0.16 + x[1] * x[1] / 0.09 +
                         (x[2] * x[2] + x[3] * x[3]) / 0.25;
        return 1.0 / std::sqrt(q);
    };
    const StarBody skew = make_custom(radial, 2, false, true, "skewed", 0.5);
    CHECK(invariance_deviation(skew, 500, 3) > 0.01);
    CHECK_THROWS_AS(make_custom(radial, 2, true, true, "skewed-claimed", 0.5),
                    PreconditionError);
}

TEST_CASE("body specs build bodies") {
    BodySpec spec;
    spec.kind = "hyperbolic_transform";
    spec.of = std::make_shared<BodySpec>(
        BodySpec{"ball", {{"rho", 0.5}, {"n", 2.0}}, nullptr});
    const StarBody M = make_body(spec);
    CHECK(M.n() == 2);
    CHECK(M.radial(UnitDirection(std::vector<double>{0, 1, 0, 0})) ==
          doctest::Approx(1.0 / std::sqrt(3.0)));

    BodySpec bad;
    bad.kind = "dodecahedron";
    CHECK_THROWS_WITH_AS(make_body(bad),
                         doctest::Contains("valid kinds"), PreconditionError);
}

TEST_CASE("complex ellipsoid is invariant and sized by its axes") {
    const StarBody E = make_complex_ellipsoid({0.6, 0.35});
    CHECK(E.radial(UnitDirection(std::vector<double>{1, 0, 0, 0})) == doctest::Approx(0.6));
    CHECK(E.radial(UnitDirection(std::vector<double>{0, 0, 0, 1})) == doctest::Approx(0.35));
    CHECK(invariance_deviation(E, 500, 4) <= 1e-14);
    CHECK(E.sup_radial() == 0.6);
    CHECK_THROWS_AS(make_complex_ellipsoid({0.5, -0.1}), PreconditionError);
}
