#pragma once

#include <string>
#include <vector>

#include "hkc/vec.hpp"

namespace hkc {

enum class InfluenceKind { rational, gaussian, affine_cutoff, tabulated };

std::string to_string(InfluenceKind k);
InfluenceKind influence_kind_from_string(const std::string& name);

/// Interaction kernel psi(r): nonnegative, Lipschitz, defined for r >= 0.
/// Immutable after construction; safe for concurrent reads.
///
/// Built-in kinds:
///   rational       kappa / (1 + r^2)^beta          params = {kappa, beta}
///   gaussian       kappa * exp(-r^2 / sigma^2)     params = {kappa, sigma}
///   affine_cutoff  max(0, a - b*r)                 params = {a, b}
///   tabulated      piecewise linear through nodes  params = {r0, v0, r1, v1, ...}
class InfluenceFunction {
public:
    /// Zero kernel (psi == 0). Placeholder state; never passes validation.
    InfluenceFunction() : InfluenceFunction(InfluenceKind::rational, {0.0, 1.0}, 0.0) {}

    static InfluenceFunction rational(double kappa, double beta = 1.0);
    static InfluenceFunction gaussian(double kappa, double sigma);
    static InfluenceFunction affine_cutoff(double a, double b);
    /// Nodes must start at r = 0 with strictly increasing r; values >= 0.
    /// Evaluation beyond the last node holds the last value.
    static InfluenceFunction tabulated(const std::vector<std::pair<double, double>>& nodes);

    /// Build from a config-style (kind, params) pair.
    static InfluenceFunction from_spec(InfluenceKind kind, const std::vector<double>& params);

    /// psi(r). Throws std::domain_error for r < 0 or non-finite r.
    double operator()(double r) const;

    InfluenceKind kind() const { return kind_; }
    const std::vector<double>& params() const { return params_; }

    /// Lipschitz constant of psi on [0, inf): closed form for the analytic
    /// kinds, max node slope for tabulated.
    double lipschitz_const() const { return lipschitz_; }

private:
    InfluenceFunction(InfluenceKind kind, std::vector<double> params, double lipschitz);

    InfluenceKind kind_;
    std::vector<double> params_;
    double lipschitz_;
};

/// Certified upper bound of sup_{0 <= r <= r_max} psi(r)*r.
/// Dense sampling plus an additive error term derived from the Lipschitz
/// constant and the sampling pitch, so the return value is a true upper
/// bound, not an estimate. Exact (per-segment closed form) for tabulated.
double effective_speed_bound(const InfluenceFunction& f, double r_max);

/// A kernel that passed validate_influence, together with the certified
/// quantities downstream modules rely on.
struct InfluenceCertificate {
    InfluenceFunction psi;
    double s = 0.0;        ///< certified sup psi(r)*r over [0, r_max]; s < c
    double psi_sup = 0.0;  ///< certified max psi over [0, r_max]
    double r_max = 0.0;    ///< range the certification covers

    double lipschitz() const { return psi.lipschitz_const(); }
};

struct InfluenceValidation {
    bool ok = false;
    InfluenceCertificate cert;  ///< meaningful iff ok
    std::string reason;         ///< on rejection
    double violating_r = 0.0;   ///< where the speed bound or positivity failed
};

/// Accepts iff effective_speed_bound(f, r_max) < c and positivity /
/// Lipschitz spot checks pass over [0, r_max].
InfluenceValidation validate_influence(const InfluenceFunction& f, double c, double r_max);

}  // namespace hkc
