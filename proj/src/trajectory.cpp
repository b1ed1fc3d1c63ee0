#include "hkc/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hkc/errors.hpp"

namespace hkc {

namespace {

// Floating-point guard for window-edge queries: delay brackets touch the
// window start exactly, and the bracket arithmetic rounds.
double edge_slack(double t) { return 1e-9 * std::max(1.0, std::abs(t)); }

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

Trajectory::Trajectory(std::vector<double> times, std::vector<Vec> points, double lipschitz_bound)
    : lipschitz_(lipschitz_bound) {
    if (times.empty() || times.size() != points.size())
        throw ContractViolation("trajectory: times and points must match and be nonempty");
    if (!(lipschitz_bound >= 0.0) || !std::isfinite(lipschitz_bound))
        throw ContractViolation("trajectory: lipschitz bound must be finite and >= 0");
    const std::size_t d = points.front().size();
    if (d == 0) throw ContractViolation("trajectory: dimension must be >= 1");
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (!std::isfinite(times[k]) || !all_finite(points[k]))
            throw ContractViolation("trajectory: samples must be finite");
        if (points[k].size() != d) throw ContractViolation("trajectory: mixed dimensions");
        if (k > 0) {
            const double dt = times[k] - times[k - 1];
            if (dt <= 0.0) throw ContractViolation("trajectory: times must be strictly increasing");
            const double step = dist(points[k], points[k - 1]);
            if (step > lipschitz_ * dt + kLipschitzSlack)
                throw ContractViolation("trajectory: Lipschitz bound violated at t=" +
                                        fmt(times[k]) + " (|dx|=" + fmt(step) + " > s*dt=" +
                                        fmt(lipschitz_ * dt) + ")");
        }
    }
    times_.assign(times.begin(), times.end());
    points_.assign(points.begin(), points.end());
    window_start_ = times_.front();
}

Trajectory::Trajectory(double t0, Vec x0, double lipschitz_bound)
    : Trajectory(std::vector<double>{t0}, std::vector<Vec>{std::move(x0)}, lipschitz_bound) {}

Vec Trajectory::eval_at(double t) const {
    if (!std::isfinite(t)) throw OutOfWindowError("eval_at: non-finite time");
    const double slack = edge_slack(t);
    if (t < window_start_ - slack || t > times_.back() + slack) {
        throw OutOfWindowError("eval_at: t=" + fmt(t) + " outside window [" + fmt(window_start_) +
                               ", " + fmt(times_.back()) + "]");
    }
    const double tc = std::clamp(t, times_.front(), times_.back());
    // first sample with time > tc
    const auto it = std::upper_bound(times_.begin(), times_.end(), tc);
    if (it == times_.begin()) return points_.front();
    if (it == times_.end()) return points_.back();
    const std::size_t hi = static_cast<std::size_t>(it - times_.begin());
    const std::size_t lo = hi - 1;
    const double t0 = times_[lo], t1 = times_[hi];
    const double w = (tc - t0) / (t1 - t0);
    Vec out(points_[lo].size());
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k] = points_[lo][k] + w * (points_[hi][k] - points_[lo][k]);
    return out;
}

Vec Trajectory::extrapolate_at(double t, const Vec& slope) const {
    if (slope.size() != points_.front().size())
        throw ContractViolation("extrapolate_at: slope dimension mismatch");
    if (norm(slope) > lipschitz_ + kLipschitzSlack)
        throw ContractViolation("extrapolate_at: |slope| exceeds the Lipschitz bound");
    const double frontier = times_.back();
    if (t < frontier - edge_slack(t))
        throw ContractViolation("extrapolate_at: t before the frontier");
    Vec out = points_.back();
    add_scaled(out, t - frontier, slope);
    return out;
}

void Trajectory::append_segment(double t_new, const Vec& x_new) {
    if (!std::isfinite(t_new) || !all_finite(x_new))
        throw ContractViolation("append_segment: non-finite sample");
    if (x_new.size() != points_.front().size())
        throw ContractViolation("append_segment: dimension mismatch");
    const double dt = t_new - times_.back();
    if (dt <= 0.0) throw ContractViolation("append_segment: t_new must pass the frontier");
    const double step = dist(x_new, points_.back());
    if (step > lipschitz_ * dt + kLipschitzSlack)
        throw ContractViolation("append_segment: Lipschitz bound violated (|dx|=" + fmt(step) +
                                " > s*dt=" + fmt(lipschitz_ * dt) + " at t=" + fmt(t_new) + ")");
    times_.push_back(t_new);
    points_.push_back(x_new);
}

void Trajectory::prune_before(double t_cut) {
    if (t_cut > times_.back()) throw ContractViolation("prune_before: cut past the frontier");
    // keep the last sample at or before t_cut
    while (times_.size() >= 2 && times_[1] <= t_cut) {
        times_.pop_front();
        points_.pop_front();
    }
    window_start_ = std::max(window_start_, t_cut);
}

}  // namespace hkc
