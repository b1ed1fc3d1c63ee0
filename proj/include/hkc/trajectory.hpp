#pragma once

#include <deque>

#include "hkc/vec.hpp"

namespace hkc {

/// One agent's path as a dense piecewise-linear history on a sliding
/// window of the past. Every consecutive pair of samples respects the
/// stored Lipschitz bound, so the interpolant stays in the class C_s.
///
/// Appends and prunes are exclusive-writer operations; evaluation is safe
/// for any number of concurrent readers between writes.
class Trajectory {
public:
    /// Slack admitted by the append/construction Lipschitz test.
    static constexpr double kLipschitzSlack = 1e-12;

    /// Builds from samples (times strictly increasing, one point per time,
    /// uniform dimension). Throws ContractViolation on a Lipschitz breach.
    Trajectory(std::vector<double> times, std::vector<Vec> points, double lipschitz_bound);

    /// Single-sample history (empty initial window).
    Trajectory(double t0, Vec x0, double lipschitz_bound);

    int dim() const { return static_cast<int>(points_.front().size()); }
    std::size_t size() const { return times_.size(); }
    double lipschitz_bound() const { return lipschitz_; }

    double frontier_time() const { return times_.back(); }
    const Vec& frontier_value() const { return points_.back(); }
    double first_sample_time() const { return times_.front(); }
    double window_start() const { return window_start_; }

    double sample_time(std::size_t k) const { return times_[k]; }
    const Vec& sample_value(std::size_t k) const { return points_[k]; }

    /// Piecewise-linear interpolation, exact at nodes.
    /// Valid for window_start <= t <= frontier (a guard of 1e-9*scale below
    /// window_start is clamped rather than rejected, since delay brackets
    /// touch the window edge exactly); outside throws OutOfWindowError.
    Vec eval_at(double t) const;

    /// Linear extension past the frontier: x(frontier) + slope*(t - frontier).
    /// |slope| must not exceed the Lipschitz bound (keeps the extension in
    /// C_s); violations throw ContractViolation. The caller limits how far
    /// ahead it extends (one integrator step).
    Vec extrapolate_at(double t, const Vec& slope) const;

    /// Extends the path. t_new must lie past the frontier and the new
    /// segment must respect the Lipschitz bound (+ kLipschitzSlack);
    /// a violation throws ContractViolation and signals an integrator bug
    /// or a kernel certified with too small an s.
    void append_segment(double t_new, const Vec& x_new);

    /// Drops samples strictly before t_cut except the last one at or
    /// before it, so eval_at(t_cut) keeps working. window_start moves up
    /// to t_cut. t_cut must not exceed the frontier.
    void prune_before(double t_cut);

private:
    std::deque<double> times_;
    std::deque<Vec> points_;
    double lipschitz_;
    double window_start_;
};

}  // namespace hkc
