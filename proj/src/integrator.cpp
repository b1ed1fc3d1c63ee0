#include "hkc/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hkc/analysis.hpp"
#include "hkc/errors.hpp"

namespace hkc {

namespace {

using DelayMatrix = std::vector<std::vector<DelayResult>>;

void tau_range(const DelayMatrix& delays, double& lo, double& hi) {
    lo = std::numeric_limits<double>::infinity();
    hi = 0.0;
    const int n = static_cast<int>(delays.size());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            lo = std::min(lo, delays[i][j].tau);
            hi = std::max(hi, delays[i][j].tau);
        }
    if (!std::isfinite(lo)) lo = 0.0;
}

void record_row(SimTrace& trace, const SystemState& state, const DelayMatrix& delays) {
    trace.times.push_back(state.t);
    trace.positions.push_back(state.positions());
    double lo, hi;
    tau_range(delays, lo, hi);
    trace.tau_min.push_back(lo);
    trace.tau_max.push_back(hi);
    const auto& pos = trace.positions.back();
    trace.diameter.push_back(diameter(pos));
    trace.radius.push_back(radius(pos));
}

double retention_cut(const SystemState& state, double dt) {
    const double tau_safe = 2.0 * state.initial_radius / (state.c - state.psi.s) + dt;
    return state.t - tau_safe;
}

void apply_euler(SystemState& state, double dt, const DelayMatrix& start_delays) {
    const int n = state.n_agents;
    std::vector<Vec> next(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        Vec v = rhs(state, i, start_delays[static_cast<std::size_t>(i)]);
        Vec x = state.position(i);
        add_scaled(x, dt, v);
        next[static_cast<std::size_t>(i)] = std::move(x);
    }
    const double t_new = state.t + dt;
    for (int i = 0; i < n; ++i)
        state.trajectories[static_cast<std::size_t>(i)].append_segment(
            t_new, next[static_cast<std::size_t>(i)]);
    state.t = t_new;
}

void apply_heun(SystemState& state, double dt, const DelayMatrix& start_delays,
                const DelaySolveOptions& opts) {
    const int n = state.n_agents;
    const double t_new = state.t + dt;

    std::vector<Vec> k1(static_cast<std::size_t>(n));
    std::vector<FrontierExtension> exts(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        k1[static_cast<std::size_t>(i)] = rhs(state, i, start_delays[static_cast<std::size_t>(i)]);
        exts[static_cast<std::size_t>(i)] =
            FrontierExtension{t_new, k1[static_cast<std::size_t>(i)]};
    }

    // corrector stage: delays resolved against the predictor-extended history
    std::vector<Vec> next(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const auto stage_delays = delayed_positions(state, i, opts, t_new, &exts);
        const Vec x_pred = state.trajectories[static_cast<std::size_t>(i)].extrapolate_at(
            t_new, k1[static_cast<std::size_t>(i)]);
        const Vec k2 = interaction_velocity(x_pred, stage_delays, state.psi.psi, n);
        Vec x = state.position(i);
        add_scaled(x, 0.5 * dt, k1[static_cast<std::size_t>(i)]);
        add_scaled(x, 0.5 * dt, k2);
        next[static_cast<std::size_t>(i)] = std::move(x);
    }
    for (int i = 0; i < n; ++i)
        state.trajectories[static_cast<std::size_t>(i)].append_segment(
            t_new, next[static_cast<std::size_t>(i)]);
    state.t = t_new;
}

}  // namespace

std::string to_string(Scheme s) {
    switch (s) {
        case Scheme::euler: return "euler";
        case Scheme::heun: return "heun";
        case Scheme::picard: return "picard";
    }
    return "?";
}

Scheme scheme_from_string(const std::string& name) {
    if (name == "euler") return Scheme::euler;
    if (name == "heun") return Scheme::heun;
    if (name == "picard") return Scheme::picard;
    throw std::invalid_argument("unknown scheme: " + name);
}

std::vector<std::vector<DelayResult>> solve_all_delays(const SystemState& state,
                                                       const DelaySolveOptions& opts) {
    DelayMatrix out;
    out.reserve(static_cast<std::size_t>(state.n_agents));
    for (int i = 0; i < state.n_agents; ++i) out.push_back(delayed_positions(state, i, opts));
    return out;
}

std::vector<std::vector<DelayResult>> step_euler(SystemState& state, double dt,
                                                 const DelaySolveOptions& opts) {
    if (!(dt > 0.0)) throw ContractViolation("step: dt must be > 0");
    DelayMatrix delays = solve_all_delays(state, opts);
    apply_euler(state, dt, delays);
    return delays;
}

std::vector<std::vector<DelayResult>> step_heun(SystemState& state, double dt,
                                                const DelaySolveOptions& opts) {
    if (!(dt > 0.0)) throw ContractViolation("step: dt must be > 0");
    DelayMatrix delays = solve_all_delays(state, opts);
    apply_heun(state, dt, delays, opts);
    return delays;
}

IntegrateResult integrate(SystemState& state, double T, double dt, const IntegrateOptions& opts) {
    if (!(dt > 0.0)) throw std::invalid_argument("integrate: dt must be > 0");
    if (!(T >= dt)) throw std::invalid_argument("integrate: T must be >= dt");

    if (opts.scheme == Scheme::picard) {
        return picard_reference(state, T, dt, opts.picard_tol, opts.picard_max_iter, nullptr,
                                opts.observers, opts.delay);
    }

    IntegrateResult result;
    SimTrace& trace = result.trace;
    trace.scheme = opts.scheme;
    trace.dt = dt;
    trace.n_agents = state.n_agents;
    trace.dim = state.dim;

    const double t_end = state.t + T;
    const double tiny = 1e-12 * std::max(1.0, std::abs(t_end));

    try {
        DelayMatrix delays = solve_all_delays(state, opts.delay);
        record_row(trace, state, delays);

        while (state.t < t_end - tiny) {
            const double t_before = state.t;
            const double dt_k = std::min(dt, t_end - state.t);
            const std::vector<Vec> x_before = state.positions();

            if (opts.scheme == Scheme::euler)
                apply_euler(state, dt_k, delays);
            else
                apply_heun(state, dt_k, delays, opts.delay);

            DelayMatrix delays_after = solve_all_delays(state, opts.delay);
            record_row(trace, state, delays_after);

            if (!opts.observers.empty()) {
                const std::vector<Vec> x_after = state.positions();
                StepRecord rec;
                rec.t_before = t_before;
                rec.t_after = state.t;
                rec.dt = dt_k;
                rec.state = &state;
                rec.delays = &delays;
                rec.x_before = &x_before;
                rec.x_after = &x_after;
                for (const auto& obs : opts.observers) obs(rec);
            }

            if (opts.prune) {
                const double cut = retention_cut(state, dt);
                for (auto& traj : state.trajectories)
                    if (cut > traj.window_start()) traj.prune_before(cut);
            }
            delays = std::move(delays_after);
        }
    } catch (const std::exception& e) {
        result.ok = false;
        result.error = e.what();
    }
    return result;
}

double contraction_window(double x0_norm, double S0, double s, double c, double L_psi,
                          double psi_sup) {
    if (!(c > 0.0) || !(s >= 0.0) || !(s < c))
        throw std::invalid_argument("contraction_window: need 0 <= s < c");
    if (x0_norm < 0.0 || S0 < 0.0 || L_psi < 0.0 || psi_sup < 0.0)
        throw std::invalid_argument("contraction_window: negative input");

    const double K = 1.0 / (1.0 - s / c);
    const double B = 2.0 * K * (psi_sup + 2.0 * L_psi * (x0_norm + s * S0));
    const double A = 4.0 * K * L_psi * s;
    // A*W^2 + B*W - 1/2 = 0, take the positive root
    if (A == 0.0) {
        if (B <= 0.0)
            throw std::invalid_argument("contraction_window: degenerate kernel (psi_sup = 0)");
        return 0.5 / B;
    }
    return (-B + std::sqrt(B * B + 2.0 * A)) / (2.0 * A);
}

double default_dt(double c, double s, double psi_sup, double S0) {
    const double by_speed = 0.01 * (c - s) / std::max(1.0, psi_sup);
    if (S0 > 0.0) return std::min(by_speed, 0.01 * S0);
    return by_speed;
}

namespace {

/// One fixed-point evaluation: velocities at every window node against the
/// candidate histories, then the cumulative trapezoid.
struct WindowWorkspace {
    std::vector<double> node_times;             // u_0..u_M
    std::vector<std::vector<Vec>> phi;          // [m][i], m = 0..M (m = 0 pinned)
    std::vector<std::vector<Vec>> f;            // velocities at nodes
    std::vector<Trajectory> candidates;
};

double apply_picard_map(const SystemState& state, WindowWorkspace& ws,
                        const DelaySolveOptions& opts) {
    const int n = state.n_agents;
    const std::size_t m_count = ws.node_times.size();

    // candidate trajectories: committed history + current iterate
    ws.candidates.clear();
    ws.candidates.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        Trajectory cand = state.trajectories[static_cast<std::size_t>(i)];
        for (std::size_t m = 1; m < m_count; ++m)
            cand.append_segment(ws.node_times[m], ws.phi[m][static_cast<std::size_t>(i)]);
        ws.candidates.push_back(std::move(cand));
    }

    ws.f.assign(m_count, std::vector<Vec>(static_cast<std::size_t>(n)));
    for (std::size_t m = 0; m < m_count; ++m) {
        const double u = ws.node_times[m];
        for (int i = 0; i < n; ++i) {
            const Vec& z = ws.phi[m][static_cast<std::size_t>(i)];
            std::vector<DelayResult> delays;
            delays.reserve(static_cast<std::size_t>(n));
            for (int j = 0; j < n; ++j) {
                if (j == i) {
                    DelayResult self;
                    self.x_delayed = z;
                    delays.push_back(std::move(self));
                } else {
                    delays.push_back(solve_delay(z, ws.candidates[static_cast<std::size_t>(j)], u,
                                                 state.c, opts));
                }
            }
            ws.f[m][static_cast<std::size_t>(i)] =
                interaction_velocity(z, delays, state.psi.psi, n);
        }
    }

    // Gamma(phi): cumulative trapezoid of the velocities from the window anchor
    double gap = 0.0;
    for (int i = 0; i < n; ++i) {
        Vec acc = ws.phi[0][static_cast<std::size_t>(i)];
        for (std::size_t m = 1; m < m_count; ++m) {
            const double h = ws.node_times[m] - ws.node_times[m - 1];
            Vec& prev_f = ws.f[m - 1][static_cast<std::size_t>(i)];
            Vec& cur_f = ws.f[m][static_cast<std::size_t>(i)];
            for (std::size_t k = 0; k < acc.size(); ++k)
                acc[k] += 0.5 * h * (prev_f[k] + cur_f[k]);
            gap = std::max(gap, dist(acc, ws.phi[m][static_cast<std::size_t>(i)]));
            ws.phi[m][static_cast<std::size_t>(i)] = acc;
        }
    }
    return gap;
}

}  // namespace

IntegrateResult picard_reference(SystemState& state, double T, double dt, double tol,
                                 int max_iter, PicardStats* stats,
                                 const std::vector<StepObserver>& observers,
                                 const DelaySolveOptions& delay_opts) {
    if (!(dt > 0.0)) throw std::invalid_argument("picard_reference: dt must be > 0");
    if (!(T >= dt)) throw std::invalid_argument("picard_reference: T must be >= dt");
    if (!(tol > 0.0)) throw std::invalid_argument("picard_reference: tol must be > 0");

    IntegrateResult result;
    SimTrace& trace = result.trace;
    trace.scheme = Scheme::picard;
    trace.dt = dt;
    trace.n_agents = state.n_agents;
    trace.dim = state.dim;

    const double s = state.psi.s;
    const double c = state.c;
    const double S0_eff = state.initial_diameter / (c - s);
    const double window = contraction_window(state.initial_radius, S0_eff, s, c,
                                             state.psi.lipschitz(), state.psi.psi_sup);
    const int steps_per_window = std::max(1, static_cast<int>(std::floor(window / dt)));

    const double t_end = state.t + T;
    const double tiny = 1e-12 * std::max(1.0, std::abs(t_end));
    const int n = state.n_agents;

    try {
        record_row(trace, state, solve_all_delays(state, delay_opts));

        while (state.t < t_end - tiny) {
            const double t0 = state.t;
            const int remaining = static_cast<int>(std::ceil((t_end - t0) / dt - 1e-9));
            const int m_steps = std::max(1, std::min(steps_per_window, remaining));

            WindowWorkspace ws;
            ws.node_times.resize(static_cast<std::size_t>(m_steps) + 1);
            for (int m = 0; m <= m_steps; ++m)
                ws.node_times[static_cast<std::size_t>(m)] =
                    std::min(t0 + static_cast<double>(m) * dt, t_end);

            // initial iterate: constant extension of the anchor positions
            ws.phi.assign(ws.node_times.size(), state.positions());

            bool converged = false;
            double prev_gap = -1.0;
            int iters = 0;
            while (iters < max_iter) {
                const double gap = apply_picard_map(state, ws, delay_opts);
                ++iters;
                if (stats != nullptr && prev_gap > 100.0 * tol && gap > 0.0)
                    stats->contraction_factors.push_back(gap / prev_gap);
                prev_gap = gap;
                if (gap <= tol) {
                    converged = true;
                    break;
                }
            }
            if (!converged) {
                result.ok = false;
                std::ostringstream os;
                os << "picard_reference: no convergence in " << max_iter
                   << " iterations on window [" << t0 << ", " << ws.node_times.back()
                   << "] (last gap " << prev_gap << "); tol too tight for the quadrature grid";
                result.error = os.str();
                return result;
            }
            if (stats != nullptr) {
                stats->window_lengths.push_back(ws.node_times.back() - t0);
                stats->window_iterations.push_back(iters);
            }

            // commit the converged window
            std::vector<Vec> x_prev = state.positions();
            DelayMatrix delays_prev = solve_all_delays(state, delay_opts);
            for (std::size_t m = 1; m < ws.node_times.size(); ++m) {
                for (int i = 0; i < n; ++i)
                    state.trajectories[static_cast<std::size_t>(i)].append_segment(
                        ws.node_times[m], ws.phi[m][static_cast<std::size_t>(i)]);
                state.t = ws.node_times[m];

                DelayMatrix delays_here = solve_all_delays(state, delay_opts);
                record_row(trace, state, delays_here);

                if (!observers.empty()) {
                    const std::vector<Vec> x_after = state.positions();
                    StepRecord rec;
                    rec.t_before = ws.node_times[m - 1];
                    rec.t_after = state.t;
                    rec.dt = state.t - ws.node_times[m - 1];
                    rec.state = &state;
                    rec.delays = &delays_prev;  // delays at the interval start
                    rec.x_before = &x_prev;
                    rec.x_after = &x_after;
                    for (const auto& obs : observers) obs(rec);
                }
                x_prev = state.positions();
                delays_prev = std::move(delays_here);
            }

            const double cut = retention_cut(state, dt);
            for (auto& traj : state.trajectories)
                if (cut > traj.window_start()) traj.prune_before(cut);
        }
    } catch (const std::exception& e) {
        result.ok = false;
        result.error = e.what();
    }
    return result;
}

}  // namespace hkc
