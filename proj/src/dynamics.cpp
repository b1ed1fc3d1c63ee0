#include "hkc/dynamics.hpp"

#include <cmath>

#include "hkc/errors.hpp"

namespace hkc {

SystemState SystemState::create(std::vector<Trajectory> trajectories, double c,
                                InfluenceCertificate psi) {
    SystemState st;
    st.n_agents = static_cast<int>(trajectories.size());
    if (st.n_agents < 2)
        throw ContractViolation("system state: at least two agents required");
    if (!(psi.s < c))
        throw ContractViolation("system state: certified s must be < c");
    st.dim = trajectories.front().dim();
    const double frontier = trajectories.front().frontier_time();
    for (const auto& traj : trajectories) {
        if (traj.dim() != st.dim)
            throw ContractViolation("system state: mixed trajectory dimensions");
        if (traj.frontier_time() != frontier)
            throw ContractViolation("system state: trajectories must share the frontier");
        if (traj.lipschitz_bound() > psi.s + Trajectory::kLipschitzSlack)
            throw ContractViolation("system state: trajectory Lipschitz bound exceeds certified s");
    }
    st.trajectories = std::move(trajectories);
    st.t = frontier;
    st.c = c;
    st.psi = std::move(psi);

    double r0 = 0.0;
    for (const auto& traj : st.trajectories)
        for (std::size_t k = 0; k < traj.size(); ++k)
            r0 = std::max(r0, norm(traj.sample_value(k)));
    st.initial_radius = r0;

    double d0 = 0.0;
    for (int i = 0; i < st.n_agents; ++i)
        for (int j = i + 1; j < st.n_agents; ++j)
            d0 = std::max(d0, dist(st.position(i), st.position(j)));
    st.initial_diameter = d0;
    return st;
}

std::vector<Vec> SystemState::positions() const {
    std::vector<Vec> out;
    out.reserve(trajectories.size());
    for (const auto& traj : trajectories) out.push_back(traj.frontier_value());
    return out;
}

Vec interaction_velocity(const Vec& x_i, const std::vector<DelayResult>& delays,
                         const InfluenceFunction& psi, int n_agents) {
    if (static_cast<int>(delays.size()) != n_agents)
        throw ContractViolation("interaction_velocity: one delay result per agent required");
    Vec v(x_i.size(), 0.0);
    for (const auto& d : delays) {
        if (d.x_delayed.size() != x_i.size())
            throw ContractViolation("interaction_velocity: dimension mismatch");
        const double r = dist(d.x_delayed, x_i);
        if (r == 0.0) continue;  // includes the j = i convention term
        const double w = psi(r);
        for (std::size_t k = 0; k < v.size(); ++k) v[k] += w * (d.x_delayed[k] - x_i[k]);
    }
    const double scale = 1.0 / static_cast<double>(n_agents - 1);
    for (double& vk : v) vk *= scale;
    return v;
}

Vec rhs(const SystemState& state, int i, const std::vector<DelayResult>& delays) {
    return interaction_velocity(state.position(i), delays, state.psi.psi, state.n_agents);
}

std::vector<Vec> rhs_classical(const std::vector<Vec>& positions, const InfluenceFunction& psi) {
    const int n = static_cast<int>(positions.size());
    std::vector<Vec> out(positions.size());
    for (int i = 0; i < n; ++i) {
        Vec v(positions[static_cast<std::size_t>(i)].size(), 0.0);
        const Vec& xi = positions[static_cast<std::size_t>(i)];
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const Vec& xj = positions[static_cast<std::size_t>(j)];
            const double r = dist(xj, xi);
            if (r == 0.0) continue;
            const double w = psi(r);
            for (std::size_t k = 0; k < v.size(); ++k) v[k] += w * (xj[k] - xi[k]);
        }
        if (n > 1) {
            const double scale = 1.0 / static_cast<double>(n - 1);
            for (double& vk : v) vk *= scale;
        }
        out[static_cast<std::size_t>(i)] = std::move(v);
    }
    return out;
}

}  // namespace hkc
