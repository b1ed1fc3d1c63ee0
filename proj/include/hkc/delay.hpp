#pragma once

#include <limits>
#include <vector>

#include "hkc/trajectory.hpp"
#include "hkc/vec.hpp"

namespace hkc {

struct SystemState;

/// Solution of the retarded-time equation c*tau = |z - x(t - tau)| for one
/// observer/source pair.
struct DelayResult {
    double tau = 0.0;
    Vec x_delayed;             ///< x(t - tau), the position the observer sees
    double bracket_lo = 0.0;   ///< |z - x(t)|/(c + s)
    double bracket_hi = 0.0;   ///< |z - x(t)|/(c - s)
    int iterations = 0;
    double residual = 0.0;     ///< c*tau - |z - x_delayed| at the returned root
};

struct DelaySolveOptions {
    /// Secant acceleration inside the bracket; pure bisection when false
    /// (the reference path: the root function is only Lipschitz at history
    /// kinks, so derivative-based steps are not trusted).
    bool use_secant = true;
    double tau_abs_tol = 1e-13;
    double g_tol_scale = 1e-12;  ///< residual tolerance = g_tol_scale * max(1, c*hi)
    int max_iterations = 200;
    /// Coincidence short-circuit: |z - x(t)| below this returns tau = 0.
    double coincident_eps = 1e-14;
};

/// Linear extension of a trajectory past its frontier, used for stage
/// evaluations inside a step before the step commits.
struct FrontierExtension {
    double horizon = 0.0;  ///< queries allowed up to this time
    Vec slope;             ///< |slope| <= trajectory Lipschitz bound
};

/// Solves c*tau = |z - x(t - tau)| for the unique tau >= 0.
///
/// g(tau) = c*tau - |z - x(t - tau)| is strictly increasing with slope at
/// least c - s > 0, so the bracketed iteration cannot miss the root.
/// Requires traj.lipschitz_bound() < c and history coverage of
/// [t - bracket_hi, t]; throws ContractViolation / OutOfWindowError.
DelayResult solve_delay(const Vec& z, const Trajectory& traj, double t, double c,
                        const DelaySolveOptions& opts = {},
                        const FrontierExtension* ext = nullptr);

/// Per-pair delays for observer i against every agent j = 0..N-1, with the
/// conventional tau_ii = 0 and x~_ii = x_i(t).
///
/// The per-agent extensions, when given, allow stage evaluations at a
/// query_time past the committed frontier (the observer's own position is
/// then the extrapolated one). NaN query_time means "the state frontier".
std::vector<DelayResult> delayed_positions(
    const SystemState& state, int i, const DelaySolveOptions& opts = {},
    double query_time = std::numeric_limits<double>::quiet_NaN(),
    const std::vector<FrontierExtension>* exts = nullptr);

}  // namespace hkc
