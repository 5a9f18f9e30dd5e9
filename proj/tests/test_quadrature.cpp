#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cxhyp/bodies.hpp"
#include "cxhyp/detail/adaptive_quad.hpp"
#include "cxhyp/geometry.hpp"
#include "cxhyp/quadrature.hpp"
#include "cxhyp/rng.hpp"
#include "cxhyp/vec.hpp"

using namespace cxhyp;

namespace {

constexpr double kPi = std::numbers::pi;

// int over S^{d-1} of prod x_i^{2a_i} = |S^{d-1}| prod (2a_i-1)!! / prod_j (d+2j)
double monomial_integral(int d, const std::vector<int>& a) {
    double num = 1.0;
    int total = 0;
    for (int ai : a) {
        for (int k = 2 * ai - 1; k >= 1; k -= 2) num *= k;
        total += ai;
    }
    double den = 1.0;
    for (int j = 0; j < total; ++j) den *= d + 2 * j;
    return sphere_surface(d - 1) * num / den;
}

} // namespace

TEST_CASE("sphere rules integrate constants to the surface area") {
    CHECK(std::abs(integrate_rule(sphere_rule(1, 8), [](auto) { return 1.0; }) - 2 * kPi) <=
          1e-10);
    CHECK(std::abs(integrate_rule(sphere_rule(3, 8), [](auto) { return 1.0; }) -
                   2 * kPi * kPi) <= 1e-10);
    CHECK(std::abs(integrate_rule(sphere_rule(5, 6), [](auto) { return 1.0; }) -
                   kPi * kPi * kPi) <= 1e-10);
    CHECK_THROWS_AS(sphere_rule(2, 4), PreconditionError);
    CHECK_THROWS_AS(sphere_rule(3, 0), PreconditionError);
}

TEST_CASE("sphere rule nodes are unit, weights positive") {
    for (int d : {1, 3, 5}) {
        const SphereRule rule = sphere_rule(d, 3);
        for (std::size_t i = 0; i < rule.size(); ++i) {
            CHECK(std::abs(vec::norm(rule.node(i)) - 1.0) <= 1e-12);
            CHECK(rule.weights[i] > 0.0);
        }
    }
}

TEST_CASE("polynomial exactness on S^3 and S^5") {
    const SphereRule s3 = sphere_rule(3, 4);
    auto mono = [](std::span<const double> x, const std::vector<int>& a) {
        double v = 1.0;
        for (std::size_t i = 0; i < a.size(); ++i)
            for (int k = 0; k < 2 * a[i]; ++k) v *= x[i];
        return v;
    };
    CHECK(std::abs(integrate_rule(s3, [&](auto x) { return mono(x, {1}); }) -
                   monomial_integral(4, {1})) <= 1e-10); // |S^3|/4
    CHECK(std::abs(integrate_rule(s3, [&](auto x) { return mono(x, {2}); }) -
                   monomial_integral(4, {2})) <= 1e-12);
    CHECK(std::abs(integrate_rule(s3, [&](auto x) { return mono(x, {1, 0, 1}); }) -
                   monomial_integral(4, {1, 0, 1})) <= 1e-12);
    CHECK(std::abs(integrate_rule(s3, [&](auto x) { return mono(x, {2, 1, 1}); }) -
                   monomial_integral(4, {2, 1, 1})) <= 1e-13);

    const SphereRule s5 = sphere_rule(5, 4);
    CHECK(std::abs(integrate_rule(s5, [&](auto x) { return mono(x, {1}); }) -
                   monomial_integral(6, {1})) <= 1e-12);
    CHECK(std::abs(integrate_rule(s5, [&](auto x) { return mono(x, {0, 0, 1, 0, 2}); }) -
                   monomial_integral(6, {0, 0, 1, 0, 2})) <= 1e-13);

    // odd monomials vanish
    CHECK(std::abs(integrate_rule(s3, [](auto x) { return x[0] * x[2]; })) <= 1e-14);
}

TEST_CASE("reduced rules agree with full rules on invariant integrands") {
    auto invariant = [](std::span<const double> x) {
        const double m1 = x[0] * x[0] + x[1] * x[1];
        return 1.0 + 0.5 * m1 * m1;
    };
    for (int n : {1, 2, 3}) {
        const double full = integrate_sphere(n, 5, false, invariant);
        const double reduced = integrate_sphere(n, 5, true, invariant);
        CHECK(std::abs(full - reduced) <= 1e-12 * std::abs(full));
    }
}

TEST_CASE("subsphere rules live in the hyperplane") {
    Xoshiro256pp rng(21);
    for (int n : {2, 3}) {
        std::vector<double> g(2 * n);
        rng.fill_gaussian(g);
        vec::scale(g, 1.0 / vec::norm(g));
        const auto frame = section_frame(UnitDirection(g));
        const SphereRule rule = subsphere_rule(frame, 6);
        const double total = integrate_rule(rule, [](auto) { return 1.0; });
        CHECK(std::abs(total - sphere_surface(2 * n - 3)) <= 1e-10);
        for (std::size_t i = 0; i < rule.size(); ++i) {
            const auto node = rule.node(i);
            CHECK(std::abs(vec::dot(node, frame.xi.coords())) <= 1e-12);
            CHECK(std::abs(vec::dot(node, frame.xi_perp.coords())) <= 1e-12);
            CHECK(std::abs(vec::norm(node) - 1.0) <= 1e-12);
        }
    }
}

TEST_CASE("radial hyperbolic integral closed form") {
    CHECK(radial_hyp_integral(0.5, 1) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    CHECK(radial_hyp_integral(0.5, 2) == doctest::Approx(1.0 / 36.0).epsilon(1e-15));
    CHECK(radial_hyp_integral(0.0, 1) == 0.0);
    CHECK(radial_hyp_integral(1e-8, 3) <= 1e-40);
    CHECK_THROWS_AS(radial_hyp_integral(1.0, 1), SingularityError);
    CHECK_THROWS_AS(radial_hyp_integral(0.5, 0), PreconditionError);

    // independent adaptive-quadrature oracle
    Xoshiro256pp rng(22);
    for (int i = 0; i < 25; ++i) {
        const double rho = 0.01 + 0.94 * rng.next_double();
        const int m = 1 + static_cast<int>(rng.next_u64() % 3);
        const double oracle = detail::adaptive_simpson(
            [m](double t) {
                return std::pow(t, 2 * m - 1) / std::pow(1 - t * t, m + 1);
            },
            0.0, rho, 1e-16);
        CHECK(radial_hyp_integral(rho, m) ==
              doctest::Approx(oracle).epsilon(1e-12));
    }
}

TEST_CASE("monotone kernel inequality holds pointwise in both orders") {
    Xoshiro256pp rng(23);
    for (int i = 0; i < 1000; ++i) {
        const double a = 0.01 + 0.97 * rng.next_double();
        const double b = 0.01 + 0.97 * rng.next_double();
        const int n = 2 + static_cast<int>(rng.next_u64() % 2);
        const double va = a * a / (1 - a * a);
        const double lhs = va * (radial_hyp_integral(b, n - 1) - radial_hyp_integral(a, n - 1));
        const double rhs = radial_hyp_integral(b, n) - radial_hyp_integral(a, n);
        CHECK(lhs <= rhs + 1e-14 * (std::abs(lhs) + std::abs(rhs) + 1));
    }
}

TEST_CASE("Monte Carlo section volume: disc of a ball") {
    const StarBody B = make_ball(0.5, 2);
    const auto frame = section_frame(UnitDirection(std::vector<double>{1, 0, 0, 0}));

    const McEstimate eu =
        mc_section_volume(B, frame, {0, 0}, SectionWeight::euclidean, 200'000, 31);
    CHECK(std::abs(eu.value - kPi * 0.25) <= 3 * eu.std_error + 1e-9);

    const McEstimate hy =
        mc_section_volume(B, frame, {0, 0}, SectionWeight::hyperbolic, 200'000, 32);
    CHECK(std::abs(hy.value - 8 * kPi / 3) <= 3 * hy.std_error + 1e-9);

    // offset beyond the radius gives the empty slice
    const McEstimate far =
        mc_section_volume(B, frame, {0.7, 0.0}, SectionWeight::euclidean, 1000, 33);
    CHECK(far.value == 0.0);

    CHECK_THROWS_AS(
        mc_section_volume(B, frame, {0.1, 0.0}, SectionWeight::hyperbolic, 1000, 34),
        PreconditionError);

    // seeded determinism
    const McEstimate again =
        mc_section_volume(B, frame, {0, 0}, SectionWeight::euclidean, 200'000, 31);
    CHECK(again.value == eu.value);
    CHECK(again.std_error == eu.std_error);
}

TEST_CASE("slice ray hits recover the radial function for central slices") {
    const StarBody E = make_complex_ellipsoid({0.6, 0.35});
    const auto frame = section_frame(UnitDirection(std::vector<double>{1, 0, 0, 0}));
    for (double phi = 0.1; phi < 6.0; phi += 0.9) {
        const std::vector<double> w = {std::cos(phi), std::sin(phi)};
        const double t = slice_ray_hit(E, frame, {0, 0}, w);
        std::vector<double> dir(4, 0.0);
        for (int j = 0; j < 4; ++j)
            dir[j] = w[0] * frame.basis[0][j] + w[1] * frame.basis[1][j];
        CHECK(t == doctest::Approx(E.radial(UnitDirection(dir))).epsilon(1e-12));
    }
}
