#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hkc/analysis.hpp"
#include "hkc/dynamics.hpp"
#include "hkc/integrator.hpp"

namespace hkc {

/// Deterministic 64-bit generator (splitmix64); identical streams on every
/// platform, which the reproducibility contract needs.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next();
    double uniform();  ///< [0, 1)
    double uniform(double lo, double hi);
    double normal();  ///< standard normal via Box-Muller
    Vec unit_vector(int dim);

private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Admissible initial data: N s-Lipschitz histories on [-S0, 0] with all
/// frontiers at t = 0 and S0 = d_x(0)/(c - s).
struct InitialDatum {
    std::vector<Trajectory> trajectories;
    double S0 = 0.0;
    std::optional<std::uint64_t> seed;
};

/// Each agent's history constant at its t = 0 position (zero-speed paths).
InitialDatum constant_history(const std::vector<Vec>& positions, double c,
                              const InfluenceCertificate& psi);

/// x_i(t) = x_i(0) + v_i*t on [-S0, 0]. Rejects |v_i| > s.
InitialDatum linear_history(const std::vector<Vec>& positions, const std::vector<Vec>& velocities,
                            double c, const InfluenceCertificate& psi);

/// The t = 0 positions random_lipschitz_history(seed, ...) will use:
/// uniform in the centered ball of radius box_radius (so the initial
/// radius never exceeds it).
std::vector<Vec> sample_box_positions(std::uint64_t seed, int n, int dim, double box_radius);

/// t = 0 positions uniform in the centered ball of radius box_radius;
/// histories piecewise linear on a pitch-S0/8 grid with random node slopes
/// of magnitude <= 0.9*s, so R_x^0 <= box_radius + 0.9*s*S0. Reproducible
/// from the seed.
InitialDatum random_lipschitz_history(std::uint64_t seed, int n, int dim, double box_radius,
                                      double c, const InfluenceCertificate& psi);

/// Assembles a state at t = 0 from a datum (computes R_x^0 and d_x(0)).
SystemState make_state(const InitialDatum& datum, double c, const InfluenceCertificate& psi);

/// Per-step diagnostics of the reduced two-agent run: x, the retarded
/// mirror position, and the sign-consistency of x + x~ with x.
struct SymmetricPairStep {
    double t = 0.0;
    double x = 0.0;
    double x_retarded = 0.0;  ///< x(t - tau), tau from c*tau = |x(t) + x(t - tau)|
    double tau = 0.0;
};

struct SymmetricPairResult {
    SimTrace trace;  ///< two agents, x and -x
    std::vector<SymmetricPairStep> steps;
    bool ok = true;
    std::string error;
};

/// Integrates the symmetric two-agent reduction directly in one unknown:
/// xdot = -psi(|x + x~|)(x + x~) with c*tau = |x(t) + x(t - tau)|, then
/// reports the pair trace via x_2 = -x_1. The datum must be scalar and
/// s-Lipschitz on [-S0, 0] with S0 = 2|x0(0)|/(c - s).
SymmetricPairResult symmetric_pair_scalar(const Trajectory& x0_path, double T, double dt, double c,
                                          const InfluenceCertificate& psi,
                                          Scheme scheme = Scheme::heun);

}  // namespace hkc
