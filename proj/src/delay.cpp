#include "hkc/delay.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hkc/dynamics.hpp"
#include "hkc/errors.hpp"

namespace hkc {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

struct HistoryLookup {
    const Trajectory& traj;
    const FrontierExtension* ext;

    Vec operator()(double u) const {
        if (ext != nullptr && u > traj.frontier_time())
            return traj.extrapolate_at(u, ext->slope);
        return traj.eval_at(u);
    }
};

}  // namespace

DelayResult solve_delay(const Vec& z, const Trajectory& traj, double t, double c,
                        const DelaySolveOptions& opts, const FrontierExtension* ext) {
    const double s = traj.lipschitz_bound();
    if (!(s < c))
        throw ContractViolation("solve_delay: trajectory Lipschitz bound " + fmt(s) +
                                " must be < c = " + fmt(c));
    const double horizon = ext != nullptr ? ext->horizon : traj.frontier_time();
    if (t > horizon + 1e-9 * std::max(1.0, std::abs(t)))
        throw ContractViolation("solve_delay: query time past the frontier");

    HistoryLookup x{traj, ext};

    DelayResult out;
    const double gap = dist(z, x(t));
    out.bracket_lo = gap / (c + s);
    out.bracket_hi = gap / (c - s);

    if (gap < opts.coincident_eps) {
        out.tau = 0.0;
        out.bracket_lo = 0.0;
        out.x_delayed = x(t);
        out.residual = -dist(z, out.x_delayed);
        return out;
    }

    if (traj.window_start() > t - out.bracket_hi + 1e-9 * std::max(1.0, out.bracket_hi))
        throw OutOfWindowError("solve_delay: history window [" + fmt(traj.window_start()) +
                               ", ...] too short for bracket hi=" + fmt(out.bracket_hi) +
                               " at t=" + fmt(t));

    // g is strictly increasing with slope in [c - s, c + s].
    auto g = [&](double tau) { return c * tau - dist(z, x(t - tau)); };

    double lo = out.bracket_lo, hi = out.bracket_hi;
    double g_lo = g(lo), g_hi = g(hi);
    int iters = 2;

    const double tol_g = opts.g_tol_scale * std::max(1.0, c * out.bracket_hi);
    // Resolve tau finely enough that the residual promise |g| <= tol_g holds
    // even when it is tighter than the absolute tau tolerance.
    const double width_tol =
        std::max(std::min(opts.tau_abs_tol, tol_g / (c + s)),
                 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(t), hi));

    double tau = lo;
    if (g_lo >= 0.0) {
        // rounding put the root at (or marginally below) the lower endpoint
        tau = lo;
    } else if (g_hi <= 0.0) {
        tau = hi;
    } else {
        while (hi - lo > width_tol && iters < opts.max_iterations) {
            double mid;
            if (opts.use_secant && (iters % 2 == 1)) {
                // secant through the bracket endpoints, pushed to the interior
                mid = lo - g_lo * (hi - lo) / (g_hi - g_lo);
                const double margin = 0.01 * (hi - lo);
                mid = std::clamp(mid, lo + margin, hi - margin);
            } else {
                mid = 0.5 * (lo + hi);
            }
            const double g_mid = g(mid);
            ++iters;
            if (g_mid == 0.0) {
                lo = hi = mid;
                g_lo = g_hi = g_mid;
                break;
            }
            if (g_mid < 0.0) {
                lo = mid;
                g_lo = g_mid;
            } else {
                hi = mid;
                g_hi = g_mid;
            }
            if (std::abs(g_mid) <= tol_g && hi - lo <= opts.tau_abs_tol) break;
        }
        // pick the endpoint with the smaller residual
        tau = std::abs(g_lo) <= std::abs(g_hi) ? lo : hi;
    }

    out.tau = tau;
    out.iterations = iters;
    out.x_delayed = x(t - tau);
    out.residual = c * tau - dist(z, out.x_delayed);
    return out;
}

std::vector<DelayResult> delayed_positions(const SystemState& state, int i,
                                           const DelaySolveOptions& opts, double query_time,
                                           const std::vector<FrontierExtension>* exts) {
    const int n = state.n_agents;
    if (i < 0 || i >= n) throw ContractViolation("delayed_positions: agent index out of range");
    const double t = std::isnan(query_time) ? state.t : query_time;

    Vec z;
    if (exts != nullptr && t > state.trajectories[i].frontier_time())
        z = state.trajectories[i].extrapolate_at(t, (*exts)[i].slope);
    else
        z = state.trajectories[i].eval_at(t);

    std::vector<DelayResult> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        if (j == i) {
            DelayResult self;
            self.tau = 0.0;
            self.x_delayed = z;
            out.push_back(std::move(self));
            continue;
        }
        const FrontierExtension* ext = exts != nullptr ? &(*exts)[j] : nullptr;
        out.push_back(solve_delay(z, state.trajectories[j], t, state.c, opts, ext));
    }
    return out;
}

}  // namespace hkc
