#pragma once

// Shared test utilities. The oracles here are written independently of the
// library paths they check: they interpolate and bisect on raw sample
// arrays, not through Trajectory/solve_delay.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "hkc/influence.hpp"
#include "hkc/scenario.hpp"
#include "hkc/vec.hpp"

namespace testutil {

inline hkc::InfluenceCertificate make_cert(const hkc::InfluenceFunction& f, double c,
                                           double r_max) {
    const auto v = hkc::validate_influence(f, c, r_max);
    if (!v.ok) throw std::runtime_error("test kernel failed validation: " + v.reason);
    return v.cert;
}

/// Piecewise-linear interpolation straight off sample arrays.
inline hkc::Vec interp(const std::vector<double>& times, const std::vector<hkc::Vec>& points,
                       double t) {
    if (t <= times.front()) return points.front();
    if (t >= times.back()) return points.back();
    std::size_t k = 1;
    while (times[k] < t) ++k;
    const double w = (t - times[k - 1]) / (times[k] - times[k - 1]);
    hkc::Vec out(points[k].size());
    for (std::size_t m = 0; m < out.size(); ++m)
        out[m] = points[k - 1][m] + w * (points[k][m] - points[k - 1][m]);
    return out;
}

/// Reference root of c*tau = |z - x(t - tau)| by plain bisection on
/// [0, span], span wide enough to bracket. Used to cross-check solve_delay.
inline double bisect_delay(const std::vector<double>& times, const std::vector<hkc::Vec>& points,
                           const hkc::Vec& z, double t, double c, double span,
                           int iters = 200) {
    auto g = [&](double tau) { return c * tau - hkc::dist(z, interp(times, points, t - tau)); };
    double lo = 0.0, hi = span;
    if (g(lo) > 0.0) return 0.0;
    for (int k = 0; k < iters; ++k) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

/// Grid argmax of psi(r)*r — an estimate from below, independent of the
/// certified scan.
inline double grid_speed_sup(const hkc::InfluenceFunction& f, double r_max,
                             std::size_t samples = 1'000'000) {
    double best = 0.0;
    for (std::size_t k = 0; k <= samples; ++k) {
        const double r = r_max * static_cast<double>(k) / static_cast<double>(samples);
        best = std::max(best, f(r) * r);
    }
    return best;
}

/// Random s-Lipschitz piecewise-linear history ending at (t_end, x_end).
struct RandomHistory {
    std::vector<double> times;
    std::vector<hkc::Vec> points;
};

inline RandomHistory random_history(hkc::Rng& rng, int dim, double s, double t_end, double span,
                                    int segments) {
    RandomHistory h;
    h.times.resize(static_cast<std::size_t>(segments) + 1);
    h.points.resize(static_cast<std::size_t>(segments) + 1);
    const double pitch = span / segments;
    hkc::Vec x(static_cast<std::size_t>(dim));
    for (auto& v : x) v = rng.uniform(-1.0, 1.0);
    h.times.back() = t_end;
    h.points.back() = x;
    for (int k = segments - 1; k >= 0; --k) {
        h.times[static_cast<std::size_t>(k)] = t_end - (segments - k) * pitch;
        const double speed = rng.uniform(0.0, 0.95 * s);
        hkc::Vec dir = rng.unit_vector(dim);
        hkc::Vec prev = h.points[static_cast<std::size_t>(k) + 1];
        hkc::add_scaled(prev, -speed * pitch, dir);
        h.points[static_cast<std::size_t>(k)] = std::move(prev);
    }
    return h;
}

}  // namespace testutil
