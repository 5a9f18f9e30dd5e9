#include "cxhyp/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "cxhyp/vec.hpp"

namespace cxhyp {

RealPoint::RealPoint(std::vector<double> c) : coords(std::move(c)) {
    if (coords.empty() || coords.size() % 2 != 0)
        throw PreconditionError("RealPoint requires an even, positive number of coordinates");
    n = static_cast<int>(coords.size() / 2);
}

UnitDirection::UnitDirection(std::vector<double> coords, double tolerance)
    : coords_(std::move(coords)), tolerance_(tolerance) {
    if (tolerance_ <= 0.0) throw PreconditionError("UnitDirection tolerance must be positive");
    if (coords_.empty() || coords_.size() % 2 != 0)
        throw PreconditionError("UnitDirection requires an even, positive number of coordinates");
    const double nrm = vec::norm(coords_);
    if (nrm < 1e-300) throw PreconditionError("UnitDirection: zero vector");
    if (std::abs(nrm - 1.0) > tolerance_) {
        vec::scale(coords_, 1.0 / nrm);
        was_normalized_ = true;
    }
}

RealPoint complex_to_real(std::span<const std::complex<double>> z) {
    std::vector<double> out(2 * z.size());
    for (std::size_t k = 0; k < z.size(); ++k) {
        out[2 * k] = z[k].real();
        out[2 * k + 1] = z[k].imag();
    }
    return RealPoint(std::move(out));
}

std::vector<std::complex<double>> real_to_complex(const RealPoint& x) {
    std::vector<std::complex<double>> out(x.n);
    for (int k = 0; k < x.n; ++k)
        out[k] = {x.coords[2 * k], x.coords[2 * k + 1]};
    return out;
}

std::vector<double> rtheta_apply(std::span<const double> x, double theta) {
    if (x.size() % 2 != 0) throw PreconditionError("rtheta_apply: odd-length vector");
    double c = std::cos(theta);
    double s = std::sin(theta);
    // Snap so that exact quarter/half turns map axes to axes exactly.
    if (std::abs(c) < 1e-15) c = 0.0;
    if (std::abs(s) < 1e-15) s = 0.0;
    std::vector<double> out(x.size());
    for (std::size_t k = 0; k + 1 < x.size(); k += 2) {
        out[k] = c * x[k] - s * x[k + 1];
        out[k + 1] = s * x[k] + c * x[k + 1];
    }
    return out;
}

RealPoint rtheta_apply(const RealPoint& x, double theta) {
    return RealPoint(rtheta_apply(std::span<const double>(x.coords), theta));
}

std::vector<double> xi_perp_of(std::span<const double> x) {
    if (x.size() % 2 != 0) throw PreconditionError("xi_perp_of: odd-length vector");
    std::vector<double> out(x.size());
    for (std::size_t k = 0; k + 1 < x.size(); k += 2) {
        out[k] = -x[k + 1];
        out[k + 1] = x[k];
    }
    return out;
}

SectionFrame section_frame(const UnitDirection& xi) {
    const std::size_t dim = xi.dim();
    std::vector<std::vector<double>> frame;
    frame.reserve(dim);
    frame.emplace_back(xi.coords().begin(), xi.coords().end());
    frame.push_back(xi_perp_of(xi.coords()));

    constexpr double kResidualSkip = 1e-8;
    for (std::size_t k = 0; k < dim && frame.size() < dim; ++k) {
        std::vector<double> v = vec::unit_axis(dim, k);
        for (const auto& u : frame) vec::axpy_sub(v, vec::dot(v, u), u);
        double nrm = vec::norm(v);
        if (nrm < kResidualSkip) continue;
        vec::scale(v, 1.0 / nrm);
        // Second orthogonalization pass keeps the Gram matrix at 1e-15.
        for (const auto& u : frame) vec::axpy_sub(v, vec::dot(v, u), u);
        nrm = vec::norm(v);
        vec::scale(v, 1.0 / nrm);
        frame.push_back(std::move(v));
    }
    if (frame.size() != dim)
        throw PreconditionError("section_frame: Gram-Schmidt completion failed");

    std::vector<std::vector<double>> basis(frame.begin() + 2, frame.end());
    return SectionFrame{
        xi,
        UnitDirection(std::move(frame[1])),
        std::move(basis),
    };
}

std::complex<double> hermitian_inner(std::span<const double> a, std::span<const double> b) {
    std::complex<double> s{0.0, 0.0};
    for (std::size_t k = 0; k + 1 < a.size(); k += 2) {
        const std::complex<double> za{a[k], a[k + 1]};
        const std::complex<double> zb{b[k], b[k + 1]};
        s += za * std::conj(zb);
    }
    return s;
}

double orbit_distance(std::span<const double> a, std::span<const double> b) {
    const double c = std::abs(hermitian_inner(a, b));
    return std::sqrt(std::max(0.0, 2.0 - 2.0 * c));
}

} // namespace cxhyp
