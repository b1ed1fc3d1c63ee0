#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hkc/delay.hpp"
#include "hkc/dynamics.hpp"

namespace hkc {

enum class Scheme { euler, heun, picard };

std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& name);

/// Time-indexed record of one integration run. Row k holds the trajectory
/// frontiers after step k (row 0 is the initial state); times are uniform
/// with pitch dt except a possibly shorter final step landing on T.
struct SimTrace {
    std::vector<double> times;
    std::vector<std::vector<Vec>> positions;  ///< [time][agent]
    std::vector<double> tau_min;              ///< over pairs i != j
    std::vector<double> tau_max;
    std::vector<double> diameter;  ///< d_x
    std::vector<double> radius;    ///< R_x
    Scheme scheme = Scheme::euler;
    double dt = 0.0;
    int n_agents = 0;
    int dim = 0;

    std::size_t rows() const { return times.size(); }
};

/// Observer payload for one committed step.
struct StepRecord {
    double t_before = 0.0;
    double t_after = 0.0;
    double dt = 0.0;
    const SystemState* state = nullptr;                        ///< after the step
    const std::vector<std::vector<DelayResult>>* delays = nullptr;  ///< [i][j] at t_before
    const std::vector<Vec>* x_before = nullptr;
    const std::vector<Vec>* x_after = nullptr;
};

using StepObserver = std::function<void(const StepRecord&)>;

/// All-pairs delay solve against the frozen state (tau_ii = 0 rows included).
std::vector<std::vector<DelayResult>> solve_all_delays(const SystemState& state,
                                                       const DelaySolveOptions& opts = {});

/// Forward Euler from a frozen snapshot: every agent steps simultaneously.
/// The returned matrix holds the delays solved at the step start.
std::vector<std::vector<DelayResult>> step_euler(SystemState& state, double dt,
                                                 const DelaySolveOptions& opts = {});

/// Heun (explicit trapezoid): predictor = Euler, corrector averages the
/// slopes at t and t+dt. Stage evaluations at t+dt resolve delays against
/// the predictor-extended histories, which stay in C_s by the slope clamp.
std::vector<std::vector<DelayResult>> step_heun(SystemState& state, double dt,
                                                const DelaySolveOptions& opts = {});

struct IntegrateOptions {
    Scheme scheme = Scheme::heun;
    double picard_tol = 1e-9;
    int picard_max_iter = 200;
    DelaySolveOptions delay;
    std::vector<StepObserver> observers;
    bool prune = true;
};

struct IntegrateResult {
    SimTrace trace;  ///< up to the failure point when !ok
    bool ok = true;
    std::string error;
};

/// Repeated stepping to time T with per-step observer callbacks and
/// history pruning per the retention policy (2*R_x^0/(c-s) + one step).
/// Requires T >= dt. Errors are reported, not thrown; the trace up to the
/// failure is returned alongside.
IntegrateResult integrate(SystemState& state, double T, double dt,
                          const IntegrateOptions& opts = {});

/// Largest window length W such that the fixed-point map of the integral
/// form is a contraction with factor <= 1/2:
///   2*W*(1 - s/c)^-1 * (psi_sup + 2*(x0_norm + s*S0 + s*W)*L_psi) <= 1/2,
/// solved in closed form (quadratic in W). Requires s < c.
double contraction_window(double x0_norm, double S0, double s, double c, double L_psi,
                          double psi_sup);

/// Convergence diagnostics of the fixed-point reference solver.
struct PicardStats {
    std::vector<double> window_lengths;
    std::vector<int> window_iterations;
    /// Per-iteration gap ratios ||phi_{k+1} - phi_k|| / ||phi_k - phi_{k-1}||,
    /// concatenated across windows (recorded while gaps are well above tol).
    std::vector<double> contraction_factors;
};

/// Fixed-point reference integrator: partitions [t, t+T] into windows no
/// longer than the contraction window, and on each window iterates the
/// integral-form map (trapezoid quadrature on the same dt grid as the
/// steppers, delays re-solved against the current iterate) until
/// successive iterates differ by at most tol in sup norm.
///
/// Non-convergence within max_iter is reported as an error (tol too tight
/// for the quadrature grid).
IntegrateResult picard_reference(SystemState& state, double T, double dt, double tol = 1e-9,
                                 int max_iter = 200, PicardStats* stats = nullptr,
                                 const std::vector<StepObserver>& observers = {},
                                 const DelaySolveOptions& delay_opts = {});

/// Default step size: min(0.01*(c-s)/max(1, psi_sup), 0.01*S0), the S0 term
/// dropped when the initial window is empty.
double default_dt(double c, double s, double psi_sup, double S0);

}  // namespace hkc
