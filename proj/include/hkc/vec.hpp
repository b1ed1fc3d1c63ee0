#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace hkc {

/// Position / velocity in R^d. Dimension is dynamic (d >= 1).
using Vec = std::vector<double>;

inline double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

inline double dist(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a[k] - b[k];
        s += d * d;
    }
    return std::sqrt(s);
}

inline Vec sub(const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) r[k] = a[k] - b[k];
    return r;
}

/// y += a*x
inline void add_scaled(Vec& y, double a, const Vec& x) {
    for (std::size_t k = 0; k < y.size(); ++k) y[k] += a * x[k];
}

inline Vec scaled(double a, const Vec& x) {
    Vec r(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) r[k] = a * x[k];
    return r;
}

inline bool all_finite(const Vec& a) {
    for (double v : a)
        if (!std::isfinite(v)) return false;
    return true;
}

}  // namespace hkc
