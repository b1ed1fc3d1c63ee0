#pragma once

#include <vector>

#include "hkc/delay.hpp"
#include "hkc/influence.hpp"
#include "hkc/trajectory.hpp"
#include "hkc/vec.hpp"

namespace hkc {

/// N agent trajectories sharing a common time frontier, plus the model
/// parameters that drive them. The kernel is carried as a certificate, so
/// s < c is established before a state can exist.
struct SystemState {
    std::vector<Trajectory> trajectories;
    double t = 0.0;  ///< common frontier time
    double c = 0.0;  ///< information propagation speed
    InfluenceCertificate psi;
    int dim = 0;
    int n_agents = 0;

    double initial_radius = 0.0;    ///< R_x^0: max |x| over the initial window
    double initial_diameter = 0.0;  ///< d_x(0)

    /// Validates N >= 2, s < c, matching dims, shared frontier.
    /// Throws ContractViolation on any breach.
    static SystemState create(std::vector<Trajectory> trajectories, double c,
                              InfluenceCertificate psi);

    const Vec& position(int i) const { return trajectories[i].frontier_value(); }
    std::vector<Vec> positions() const;
};

/// Velocity of agent i under the delayed interaction law:
/// (1/(N-1)) * sum_j psi(|x~_j - x_i|) (x~_j - x_i), the j = i term an
/// exact zero. The result never exceeds the certified s in norm.
Vec rhs(const SystemState& state, int i, const std::vector<DelayResult>& delays);

/// Same sum evaluated at an explicit observer position (stage evaluations
/// use the predictor position rather than the committed frontier).
Vec interaction_velocity(const Vec& x_i, const std::vector<DelayResult>& delays,
                         const InfluenceFunction& psi, int n_agents);

/// Undelayed baseline: same law evaluated on current positions only
/// (the c -> infinity comparison point).
std::vector<Vec> rhs_classical(const std::vector<Vec>& positions, const InfluenceFunction& psi);

}  // namespace hkc
