#include "cxhyp/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>

#include "cxhyp/rng.hpp"
#include "cxhyp/vec.hpp"

namespace cxhyp {

namespace {

constexpr double kPi = std::numbers::pi;

// Gauss-Legendre nodes/weights on [0,1]. Newton iteration on the Legendre
// recurrence, standard construction.
void gauss_legendre_01(int count, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.resize(count);
    weights.resize(count);
    const int m = (count + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (count + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= count; ++k) {
                const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = count * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        nodes[i] = (1.0 - x) / 2.0;
        nodes[count - 1 - i] = (1.0 + x) / 2.0;
        weights[i] = w / 2.0;
        weights[count - 1 - i] = w / 2.0;
    }
}

struct PhaseTable {
    std::vector<double> cs, sn;
    explicit PhaseTable(std::size_t n) : cs(n), sn(n) {
        for (std::size_t j = 0; j < n; ++j) {
            const double phi = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(n);
            cs[j] = std::cos(phi);
            sn[j] = std::sin(phi);
        }
    }
};

const PhaseTable& phase_table(std::size_t n) {
    thread_local std::size_t cached_n = 0;
    thread_local std::unique_ptr<PhaseTable> cached;
    if (cached_n != n) {
        cached = std::make_unique<PhaseTable>(n);
        cached_n = n;
    }
    return *cached;
}

} // namespace

int phase_points(int level) { return 2 * level + 2; }

int default_level(int n) {
    switch (n) {
        case 1: return 64;
        case 2: return 32;
        case 3: return 24;
        default: return 16;
    }
}

double sphere_surface(int d) {
    switch (d) {
        case 1: return 2.0 * kPi;
        case 3: return 2.0 * kPi * kPi;
        case 5: return kPi * kPi * kPi;
        default:
            if (d < 1) throw PreconditionError("sphere_surface: dimension must be >= 1");
            return 2.0 * std::pow(kPi, 0.5 * (d + 1)) / std::tgamma(0.5 * (d + 1));
    }
}

double ball_volume(int d, double r) {
    double unit;
    switch (d) {
        case 2: unit = kPi; break;
        case 4: unit = kPi * kPi / 2.0; break;
        case 6: unit = kPi * kPi * kPi / 6.0; break;
        default:
            if (d < 1) throw PreconditionError("ball_volume: dimension must be >= 1");
            unit = std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
    }
    return unit * std::pow(r, d);
}

ProductSphereRule::ProductSphereRule(int n_complex, int level, bool reduced)
    : n_(n_complex), reduced_(reduced) {
    if (n_ < 1 || n_ > 3)
        throw PreconditionError("ProductSphereRule: complex dimension must be 1, 2 or 3");
    if (level < 1) throw PreconditionError("ProductSphereRule: level must be >= 1");
    nphi_ = static_cast<std::size_t>(phase_points(level));
    if (n_ >= 2) gauss_legendre_01(level, gl_nodes_u_, gl_weights_u_);
    if (n_ == 3) gauss_legendre_01(level + 1, gl_nodes_v_, gl_weights_v_);

    const std::size_t lu = gl_nodes_u_.size();
    const std::size_t lv = gl_nodes_v_.size();
    switch (n_) {
        case 1: size_ = reduced_ ? 1 : nphi_; break;
        case 2: size_ = lu * nphi_ * (reduced_ ? 1 : nphi_); break;
        default: size_ = lv * lu * nphi_ * nphi_ * (reduced_ ? 1 : nphi_); break;
    }
    if (size_ > (std::size_t{1} << 31))
        throw GuardError("ProductSphereRule: rule too large; lower the level or use an "
                         "R_theta-invariant (reduced) rule");
}

double ProductSphereRule::node(std::size_t idx, std::span<double> out) const {
    const PhaseTable& tab = phase_table(nphi_);
    const double dphi = 2.0 * kPi / static_cast<double>(nphi_);

    if (n_ == 1) {
        if (reduced_) {
            out[0] = 1.0;
            out[1] = 0.0;
            return 2.0 * kPi;
        }
        out[0] = tab.cs[idx];
        out[1] = tab.sn[idx];
        return dphi;
    }

    if (n_ == 2) {
        const std::size_t j2 = idx % nphi_;
        idx /= nphi_;
        std::size_t j1 = 0;
        if (!reduced_) {
            j1 = idx % nphi_;
            idx /= nphi_;
        }
        const std::size_t iu = idx;
        const double u = gl_nodes_u_[iu];
        const double c = std::sqrt(1.0 - u);
        const double s = std::sqrt(u);
        out[0] = c * tab.cs[j1];
        out[1] = c * tab.sn[j1];
        out[2] = s * tab.cs[j2];
        out[3] = s * tab.sn[j2];
        const double base = 0.5 * gl_weights_u_[iu] * dphi;
        return reduced_ ? base * 2.0 * kPi : base * dphi;
    }

    // n == 3
    const std::size_t j3 = idx % nphi_;
    idx /= nphi_;
    const std::size_t j2 = idx % nphi_;
    idx /= nphi_;
    std::size_t j1 = 0;
    if (!reduced_) {
        j1 = idx % nphi_;
        idx /= nphi_;
    }
    const std::size_t iu = idx % gl_nodes_u_.size();
    const std::size_t iv = idx / gl_nodes_u_.size();
    const double v = gl_nodes_v_[iv];
    const double u = gl_nodes_u_[iu];
    const double r1 = std::sqrt(1.0 - v);
    const double r2 = std::sqrt(v * (1.0 - u));
    const double r3 = std::sqrt(v * u);
    out[0] = r1 * tab.cs[j1];
    out[1] = r1 * tab.sn[j1];
    out[2] = r2 * tab.cs[j2];
    out[3] = r2 * tab.sn[j2];
    out[4] = r3 * tab.cs[j3];
    out[5] = r3 * tab.sn[j3];
    const double base = 0.25 * v * gl_weights_v_[iv] * gl_weights_u_[iu] * dphi * dphi;
    return reduced_ ? base * 2.0 * kPi : base * dphi;
}

SphereRule sphere_rule(int d, int level) {
    if (d != 1 && d != 3 && d != 5)
        throw PreconditionError("sphere_rule: supported sphere dimensions are 1, 3, 5");
    const int n = (d + 1) / 2;
    const ProductSphereRule rule(n, level, /*reduced=*/false);
    if (rule.size() > 30'000'000)
        throw GuardError("sphere_rule: rule too large to materialize at this level");
    SphereRule out;
    out.sphere_dim = d;
    out.ambient_dim = d + 1;
    out.nodes.resize(rule.size() * static_cast<std::size_t>(d + 1));
    out.weights.resize(rule.size());
    std::vector<double> x(d + 1);
    for (std::size_t i = 0; i < rule.size(); ++i) {
        out.weights[i] = rule.node(i, x);
        std::copy(x.begin(), x.end(), out.nodes.begin() + i * (d + 1));
    }
    return out;
}

SphereRule subsphere_rule(const SectionFrame& frame, int level) {
    const int n = frame.ncomplex();
    if (n < 2) throw PreconditionError("subsphere_rule: requires complex dimension >= 2");
    if (n > 3) throw PreconditionError("subsphere_rule: complex dimension > 3 unsupported");
    const SphereRule inner = sphere_rule(2 * n - 3, level);
    const int ambient = 2 * n;
    SphereRule out;
    out.sphere_dim = inner.sphere_dim;
    out.ambient_dim = ambient;
    out.weights = inner.weights;
    out.nodes.assign(inner.size() * static_cast<std::size_t>(ambient), 0.0);
    for (std::size_t i = 0; i < inner.size(); ++i) {
        const auto c = inner.node(i);
        double* dst = out.nodes.data() + i * ambient;
        for (std::size_t k = 0; k < frame.basis.size(); ++k) {
            const double ck = c[k];
            const auto& bk = frame.basis[k];
            for (int j = 0; j < ambient; ++j) dst[j] += ck * bk[static_cast<std::size_t>(j)];
        }
    }
    return out;
}

double radial_hyp_integral(double rho, int m) {
    if (m < 1) throw PreconditionError("radial_hyp_integral: m must be >= 1");
    if (!(rho >= 0.0)) throw PreconditionError("radial_hyp_integral: rho must be >= 0");
    if (rho >= 1.0)
        throw SingularityError("radial_hyp_integral: rho >= 1, kernel not integrable");
    const double v = rho * rho / ((1.0 - rho) * (1.0 + rho));
    double p = v;
    for (int k = 1; k < m; ++k) p *= v;
    return p / (2.0 * m);
}

namespace {

std::vector<double> embed_in_plane(const SectionFrame& frame, std::span<const double> coeff) {
    const std::size_t dim = frame.dim();
    std::vector<double> out(dim, 0.0);
    for (std::size_t k = 0; k < frame.basis.size(); ++k)
        for (std::size_t j = 0; j < dim; ++j) out[j] += coeff[k] * frame.basis[k][j];
    return out;
}

std::vector<double> offset_point(const SectionFrame& frame, std::array<double, 2> offset) {
    const std::size_t dim = frame.dim();
    std::vector<double> out(dim, 0.0);
    for (std::size_t j = 0; j < dim; ++j)
        out[j] = offset[0] * frame.xi[j] + offset[1] * frame.xi_perp[j];
    return out;
}

// Deterministic sweep directions on the slice sphere, in basis coordinates.
std::vector<std::vector<double>> sweep_directions(int d_sub) {
    std::vector<std::vector<double>> dirs;
    if (d_sub == 2) {
        dirs.reserve(64);
        for (int j = 0; j < 64; ++j) {
            const double phi = 2.0 * kPi * j / 64.0;
            dirs.push_back({std::cos(phi), std::sin(phi)});
        }
    } else {
        // 4-D slices need a denser sweep before a small inflation factor can
        // be trusted for convex sections.
        dirs.reserve(512);
        Xoshiro256pp rng(0x5347EEDULL);
        std::vector<double> g(static_cast<std::size_t>(d_sub));
        while (dirs.size() < 512) {
            rng.fill_gaussian(g);
            const double nrm = vec::norm(g);
            if (nrm < 1e-12) continue;
            std::vector<double> d(g);
            vec::scale(d, 1.0 / nrm);
            dirs.push_back(std::move(d));
        }
    }
    return dirs;
}

} // namespace

double ray_boundary_hit(const StarBody& K, std::span<const double> origin,
                        std::span<const double> dir_unit, double hi_start) {
    std::array<double, 16> buf{};
    const std::size_t dim = origin.size();
    std::span<double> x(buf.data(), dim);
    auto mink_at = [&](double t) {
        for (std::size_t j = 0; j < dim; ++j) x[j] = origin[j] + t * dir_unit[j];
        return K.minkowski(std::span<const double>(x.data(), dim));
    };
    double hi = hi_start > 0.0 ? hi_start : 1e-12;
    int expand = 0;
    while (mink_at(hi) < 1.0 && expand++ < 64) hi *= 2.0;
    double lo = 0.0;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (mink_at(mid) < 1.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double slice_ray_hit(const StarBody& K, const SectionFrame& frame,
                     std::array<double, 2> offset, std::span<const double> w_basis) {
    const auto u0 = offset_point(frame, offset);
    if (K.minkowski(u0) >= 1.0) return 0.0;
    const auto w = embed_in_plane(frame, w_basis);
    const double off2 = offset[0] * offset[0] + offset[1] * offset[1];
    const double cert = K.certified_circumradius();
    const double hi = std::sqrt(std::max(cert * cert - off2, 0.0)) * (1.0 + 1e-9) + 1e-12;
    return ray_boundary_hit(K, u0, w, hi);
}

McEstimate mc_section_volume(const StarBody& K, const SectionFrame& frame,
                             std::array<double, 2> offset, SectionWeight weight,
                             std::size_t samples, std::uint64_t seed) {
    if (samples < 1) throw PreconditionError("mc_section_volume: samples must be >= 1");
    const int n = K.n();
    if (n < 2) throw PreconditionError("mc_section_volume: requires complex dimension >= 2");
    if (frame.ncomplex() != n)
        throw PreconditionError("mc_section_volume: frame dimension mismatch");
    const double off2 = offset[0] * offset[0] + offset[1] * offset[1];
    if (weight == SectionWeight::hyperbolic && off2 > 0.0)
        throw PreconditionError(
            "mc_section_volume: hyperbolic weight is defined for central sections only");
    if (weight == SectionWeight::hyperbolic && K.sup_radial() >= 1.0)
        throw ContainmentError(
            "mc_section_volume: hyperbolic weight requires a body inside the unit ball");

    const int d_sub = 2 * n - 2;
    McEstimate est;
    est.samples = samples;
    est.seed = seed;

    const double cert = K.certified_circumradius();
    const double cert_inplane2 = cert * cert - off2;
    if (cert_inplane2 <= 0.0) return est; // empty slice

    double bound = std::sqrt(cert_inplane2);
    const auto u0 = offset_point(frame, offset);
    if (K.minkowski(u0) < 1.0) {
        double sweep_max = 0.0;
        for (const auto& w : sweep_directions(d_sub))
            sweep_max = std::max(sweep_max, slice_ray_hit(K, frame, offset, w));
        bound = std::min(bound, 1.05 * sweep_max);
    }
    if (bound <= 0.0) return est;

    const double vol_bound = ball_volume(d_sub, bound);
    const double hyp_factor = std::pow(8.0, n - 1);
    const double inv_n_samples = 1.0 / static_cast<double>(samples);

    constexpr std::size_t kChunk = 1 << 14;
    const std::size_t chunks = (samples + kChunk - 1) / kChunk;
    std::vector<double> sum(chunks, 0.0), sumsq(chunks, 0.0);

    parallel_chunks(chunks, [&](std::size_t c) {
        auto rng = Xoshiro256pp::for_chunk(seed, c);
        const std::size_t lo = c * kChunk;
        const std::size_t hi = std::min(lo + kChunk, samples);
        std::vector<double> g(static_cast<std::size_t>(d_sub));
        std::vector<double> w(u0.size());
        std::vector<double> y(u0.size());
        double acc = 0.0, acc2 = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            // radius stratified over the global sample index
            const double t = (static_cast<double>(i) + rng.next_double()) * inv_n_samples;
            const double r = bound * std::pow(t, 1.0 / d_sub);
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
            for (std::size_t j = 0; j < y.size(); ++j) y[j] = u0[j] + r * w[j];
            double val = 0.0;
            if (K.minkowski(y) <= 1.0) {
                if (weight == SectionWeight::euclidean) {
                    val = 1.0;
                } else {
                    const double y2 = vec::norm2(y);
                    double q = 1.0 - y2;
                    double dens = 1.0;
                    for (int k = 0; k < n; ++k) dens *= q;
                    val = hyp_factor / dens;
                }
            }
            acc += val;
            acc2 += val * val;
        }
        sum[c] = acc;
        sumsq[c] = acc2;
    });

    double total = 0.0, total2 = 0.0;
    for (std::size_t c = 0; c < chunks; ++c) {
        total += sum[c];
        total2 += sumsq[c];
    }
    const double mean = total * inv_n_samples;
    const double var = std::max(0.0, total2 * inv_n_samples - mean * mean);
    est.value = vol_bound * mean;
    est.std_error = vol_bound * std::sqrt(var * inv_n_samples);
    return est;
}

} // namespace cxhyp
