#include "cxhyp/hyperbolic_volume.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cxhyp/rng.hpp"
#include "cxhyp/vec.hpp"

namespace cxhyp {

namespace {

void require_in_unit_ball(const StarBody& K, const char* who) {
    if (K.sup_radial() >= 1.0) {
        std::ostringstream msg;
        msg << who << ": body '" << K.label() << "' is not inside the open unit ball"
            << " (sup radial " << K.sup_radial() << ")";
        throw SingularityError(msg.str());
    }
}

double int_pow(double x, int p) {
    double r = 1.0;
    for (int i = 0; i < p; ++i) r *= x;
    return r;
}

double hvol_raw(const StarBody& K, int level) {
    const int n = K.n();
    return int_pow(8.0, n) *
           integrate_sphere(n, level, K.claims_rtheta_invariant(),
                            [&](std::span<const double> x) {
                                return radial_hyp_integral(K.radial(x), n);
                            });
}

double evol_raw(const StarBody& K, int level) {
    const int n = K.n();
    return integrate_sphere(n, level, K.claims_rtheta_invariant(),
                            [&](std::span<const double> x) {
                                return int_pow(K.radial(x), 2 * n);
                            }) /
           (2.0 * n);
}

int coarse(int level) { return std::max(level / 2, 2); }

} // namespace

VolumeResult hvol(const StarBody& K, int level) {
    require_in_unit_ball(K, "hvol");
    if (level <= 0) level = default_level(K.n());
    VolumeResult out;
    out.value = hvol_raw(K, level);
    out.error_estimate = std::abs(out.value - hvol_raw(K, coarse(level)));
    return out;
}

VolumeResult evol(const StarBody& K, int level) {
    if (level <= 0) level = default_level(K.n());
    VolumeResult out;
    out.value = evol_raw(K, level);
    out.error_estimate = std::abs(out.value - evol_raw(K, coarse(level)));
    return out;
}

namespace {

double section_integral(const StarBody& K, const SectionFrame& frame, int level, int m,
                        double prefactor) {
    const SphereRule rule = subsphere_rule(frame, level);
    return prefactor * integrate_rule(rule, [&](std::span<const double> x) {
        return m > 0 ? radial_hyp_integral(K.radial(x), m)
                     : int_pow(K.radial(x), 2 * K.n() - 2);
    });
}

} // namespace

VolumeResult hvol_section(const StarBody& K, const UnitDirection& xi, int level) {
    const int n = K.n();
    if (n < 2)
        throw PreconditionError("hvol_section: no complex hyperplanes in complex dimension 1");
    if (xi.ncomplex() != n) throw PreconditionError("hvol_section: direction dimension mismatch");
    require_in_unit_ball(K, "hvol_section");
    if (level <= 0) level = default_level(n);
    const SectionFrame frame = section_frame(xi);
    const double pref = int_pow(8.0, n - 1);
    VolumeResult out;
    out.value = section_integral(K, frame, level, n - 1, pref);
    out.error_estimate =
        std::abs(out.value - section_integral(K, frame, coarse(level), n - 1, pref));
    return out;
}

VolumeResult evol_section(const StarBody& K, const UnitDirection& xi, int level) {
    const int n = K.n();
    if (n < 2) throw PreconditionError("evol_section: requires complex dimension >= 2");
    if (xi.ncomplex() != n) throw PreconditionError("evol_section: direction dimension mismatch");
    if (level <= 0) level = default_level(n);
    const SectionFrame frame = section_frame(xi);
    const double pref = 1.0 / (2.0 * n - 2.0);
    VolumeResult out;
    out.value = section_integral(K, frame, level, 0, pref);
    out.error_estimate =
        std::abs(out.value - section_integral(K, frame, coarse(level), 0, pref));
    return out;
}

double transform_volume_identity(const StarBody& K, int level) {
    require_in_unit_ball(K, "transform_volume_identity");
    if (level <= 0) level = default_level(K.n());
    const StarBody M = hyperbolic_transform(K);
    const double h = hvol_raw(K, level);
    const double e = int_pow(8.0, K.n()) * evol_raw(M, level);
    return std::abs(h - e) / std::abs(h);
}

SandwichReport sandwich_check(const StarBody& K, double s, int level, int directions) {
    if (!(s > 0.0 && s < 1.0)) throw PreconditionError("sandwich_check: s must lie in (0,1)");
    if (K.sup_radial() > s * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "sandwich_check: sup radial " << K.sup_radial() << " exceeds s = " << s;
        throw PreconditionError(msg.str());
    }
    const int n = K.n();
    if (level <= 0) level = default_level(n);

    SandwichReport rep;
    rep.s = s;
    const double one_minus_s2 = (1.0 - s) * (1.0 + s);
    rep.volume_bound = 1.0 / int_pow(one_minus_s2, n + 1);
    rep.section_bound = 1.0 / int_pow(one_minus_s2, n);

    const double hv = hvol_raw(K, level);
    const double ev = int_pow(8.0, n) * evol_raw(K, level);
    rep.volume_ratio = hv / ev;

    if (n >= 2) {
        Xoshiro256pp rng(0x5A17D3ULL);
        std::vector<double> g(static_cast<std::size_t>(2 * n));
        for (int d = 0; d < directions; ++d) {
            rng.fill_gaussian(g);
            const double nrm = vec::norm(g);
            if (nrm < 1e-12) continue;
            std::vector<double> coords(g);
            vec::scale(coords, 1.0 / nrm);
            const UnitDirection xi(std::move(coords));
            const SectionFrame frame = section_frame(xi);
            const double hs = section_integral(K, frame, level, n - 1, int_pow(8.0, n - 1));
            const double es =
                int_pow(8.0, n - 1) * section_integral(K, frame, level, 0, 1.0 / (2.0 * n - 2.0));
            rep.section_ratios.push_back(hs / es);
        }
    }

    rep.ok = rep.volume_ratio >= 1.0 - rep.slack &&
             rep.volume_ratio <= rep.volume_bound + rep.slack;
    for (double r : rep.section_ratios)
        rep.ok = rep.ok && r >= 1.0 - rep.slack && r <= rep.section_bound + rep.slack;
    return rep;
}

} // namespace cxhyp
