#pragma once

// Small dense-vector helpers for the low-dimensional (2n ≤ 6 typical)
// geometry in this library. No external linear-algebra dependency needed.

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace cxhyp::vec {

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(std::span<const double> a) { return dot(a, a); }

inline double norm(std::span<const double> a) { return std::sqrt(norm2(a)); }

inline void scale(std::span<double> a, double c) {
    for (double& x : a) x *= c;
}

// a -= c * b
inline void axpy_sub(std::span<double> a, double c, std::span<const double> b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] -= c * b[i];
}

inline std::vector<double> unit_axis(std::size_t dim, std::size_t k) {
    std::vector<double> e(dim, 0.0);
    e[k] = 1.0;
    return e;
}

} // namespace cxhyp::vec
