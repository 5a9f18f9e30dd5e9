#include <doctest.h>

#include <complex>
#include <numbers>

#include "cxhyp/geometry.hpp"
#include "cxhyp/rng.hpp"
#include "cxhyp/vec.hpp"

using namespace cxhyp;

namespace {

constexpr double kPi = std::numbers::pi;

UnitDirection random_direction(Xoshiro256pp& rng, int dim) {
    std::vector<double> g(dim);
    rng.fill_gaussian(g);
    vec::scale(g, 1.0 / vec::norm(g));
    return UnitDirection(std::move(g));
}

} // namespace

TEST_CASE("complex/real identification is interleaved and round-trips") {
    const std::vector<std::complex<double>> z = {{1, 2}, {3, 4}};
    const RealPoint p = complex_to_real(z);
    CHECK(p.n == 2);
    CHECK(p.coords == std::vector<double>{1, 2, 3, 4});

    const RealPoint zero = complex_to_real(std::vector<std::complex<double>>{{0, 0}, {0, 0}, {0, 0}});
    for (double c : zero.coords) CHECK(c == 0.0);

    Xoshiro256pp rng(1);
    for (int i = 0; i < 100; ++i) {
        std::vector<std::complex<double>> w(3);
        for (auto& c : w) {
            const auto g = rng.next_gaussian_pair();
            c = {g[0], g[1]};
        }
        const auto back = real_to_complex(complex_to_real(w));
        for (int k = 0; k < 3; ++k) CHECK(back[k] == w[k]);
    }
}

TEST_CASE("rtheta_apply rotates coordinate pairs") {
    const std::vector<double> e1 = {1, 0, 0, 0};
    CHECK(rtheta_apply(std::span<const double>(e1), kPi / 2) ==
          std::vector<double>{0, 1, 0, 0});

    Xoshiro256pp rng(2);
    for (int i = 0; i < 50; ++i) {
        const auto xi = random_direction(rng, 6);
        const std::vector<double> x(xi.coords().begin(), xi.coords().end());
        CHECK(rtheta_apply(std::span<const double>(x), 0.0) == x);

        const double theta = rng.next_double() * 2 * kPi;
        const auto rot = rtheta_apply(std::span<const double>(x), theta);
        CHECK(std::abs(vec::norm(rot) - vec::norm(x)) <= 1e-14);

        // composition
        const double a = rng.next_double() * 2 * kPi, b = rng.next_double() * 2 * kPi;
        const auto one_step = rtheta_apply(std::span<const double>(x), a + b);
        const auto two_step =
            rtheta_apply(std::span<const double>(rtheta_apply(std::span<const double>(x), a)), b);
        for (int k = 0; k < 6; ++k) CHECK(std::abs(one_step[k] - two_step[k]) <= 1e-12);

        // quarter turn equals the pairwise companion formula
        CHECK(rtheta_apply(std::span<const double>(x), kPi / 2) ==
              xi_perp_of(std::span<const double>(x)));
    }
}

TEST_CASE("rotated directions stay in the span of xi and xi_perp") {
    Xoshiro256pp rng(3);
    for (int i = 0; i < 50; ++i) {
        const auto xi = random_direction(rng, 4);
        const auto frame = section_frame(xi);
        const double theta = rng.next_double() * 2 * kPi;
        const auto rot = rtheta_apply(xi.coords(), theta);
        double proj = 0.0;
        for (const auto& v : frame.basis)
            proj += std::pow(vec::dot(rot, std::span<const double>(v)), 2);
        CHECK(std::sqrt(proj) <= 1e-12);
    }
}

TEST_CASE("section_frame on an axis direction") {
    const UnitDirection e1(std::vector<double>{1, 0, 0, 0});
    const auto frame = section_frame(e1);
    CHECK(frame.xi_perp.coords()[1] == 1.0);
    CHECK(frame.basis.size() == 2);
    CHECK(frame.basis[0] == std::vector<double>{0, 0, 1, 0});
    CHECK(frame.basis[1] == std::vector<double>{0, 0, 0, 1});
}

TEST_CASE("section_frame is orthonormal and deterministic") {
    Xoshiro256pp rng(4);
    for (int i = 0; i < 100; ++i) {
        const int n = (i % 2) ? 2 : 3;
        const auto xi = random_direction(rng, 2 * n);
        const auto frame = section_frame(xi);
        std::vector<std::span<const double>> all;
        all.push_back(frame.xi.coords());
        all.push_back(frame.xi_perp.coords());
        for (const auto& v : frame.basis) all.emplace_back(v);
        REQUIRE(all.size() == static_cast<std::size_t>(2 * n));
        for (std::size_t r = 0; r < all.size(); ++r)
            for (std::size_t c = 0; c < all.size(); ++c) {
                const double expected = r == c ? 1.0 : 0.0;
                CHECK(std::abs(vec::dot(all[r], all[c]) - expected) <= 1e-12);
            }

        // xi_perp is exactly the quarter turn of xi
        const auto quarter = rtheta_apply(xi.coords(), kPi / 2);
        for (int k = 0; k < 2 * n; ++k) CHECK(frame.xi_perp[k] == quarter[k]);

        // determinism
        const auto again = section_frame(xi);
        CHECK(again.basis == frame.basis);
    }
}

TEST_CASE("UnitDirection normalizes off-sphere input and rejects zero") {
    const UnitDirection d(std::vector<double>{3, 0, 4, 0});
    CHECK(d.was_normalized());
    CHECK(std::abs(vec::norm(d.coords()) - 1.0) <= 1e-15);
    CHECK_THROWS_AS(UnitDirection(std::vector<double>{0, 0, 0, 0}), PreconditionError);
    CHECK_THROWS_AS(UnitDirection(std::vector<double>{1, 0, 0}), PreconditionError);
}

TEST_CASE("orbit distance detects shared orbits") {
    const UnitDirection xi(std::vector<double>{0.6, 0, 0.8, 0});
    const auto rot = rtheta_apply(xi.coords(), 1.7);
    CHECK(orbit_distance(xi.coords(), rot) <= 1e-12);
    const UnitDirection other(std::vector<double>{1, 0, 0, 0});
    CHECK(orbit_distance(xi.coords(), other.coords()) > 0.1);
}
