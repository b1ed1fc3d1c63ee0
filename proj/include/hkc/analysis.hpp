#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hkc/influence.hpp"
#include "hkc/integrator.hpp"

namespace hkc {

/// Max pairwise distance d_x of the group. Requires N >= 2.
double diameter(const std::vector<Vec>& positions);

/// Max distance from the origin R_x.
double radius(const std::vector<Vec>& positions);

/// R_x^0: max radius over every sample of the given (initial-window)
/// trajectories. Piecewise-linear paths attain it at nodes.
double radius_over_window(const std::vector<Trajectory>& trajectories);

/// 1D only: true iff the agent ordering of row 0 holds at every trace time
/// (slack absorbs discretization roundoff).
bool ordering_preserved(const SimTrace& trace, double slack = 1e-9);

/// Earliest trace time with d_x <= eps; nullopt if never reached.
std::optional<double> consensus_time(const SimTrace& trace, double eps);

enum class CertificateRange { initial_radius, twice_initial_radius };

/// psi_lo/psi_hi over a compact range plus the decay rate
/// lambda = N/(N-1)*psi_lo - 2s/(c-s)*psi_hi; lambda > 0 certifies
/// exponential consensus.
struct DecayCertificate {
    double psi_lo = 0.0;
    double psi_hi = 0.0;
    double lambda = 0.0;
    bool condition_met = false;
    double range_lo = 0.0;
    double range_hi = 0.0;
    /// Pairwise and retarded distances can reach twice the radius bound,
    /// while the default range stops at the radius itself; the report
    /// surfaces this rather than resolving it.
    std::string range_note;
};

DecayCertificate decay_certificate(const InfluenceCertificate& psi, double c, int n_agents,
                                   double R0,
                                   CertificateRange range = CertificateRange::initial_radius);

/// One invariant check at one step.
struct AuditRecord {
    double t = 0.0;
    std::string check;
    double margin = 0.0;  ///< >= 0 means the invariant held; slack already applied
    bool pass = true;
};

struct AuditOptions {
    double slack = 1e-9;
    double pair_distance_floor = 1e-6;  ///< the geometric bound is checked above this
    double speed_rel_slack = 1e-10;     ///< displacement <= s*dt*(1 + this)
    bool keep_all_records = false;      ///< keep passing rows too (audit CSV)
};

struct AuditSummary {
    long checks = 0;
    long failures = 0;
    std::vector<AuditRecord> failing;      ///< every failure
    std::vector<AuditRecord> all_records;  ///< populated when keep_all_records
    /// Worst (most negative) margin seen per check name, for reporting.
    std::vector<std::pair<std::string, double>> worst_margins;

    bool all_passed() const { return failures == 0; }
    double worst_margin(const std::string& check) const;
};

/// Evaluates the per-step invariant checks:
///   delay_bracket   tau within its bracket, per pair
///   geometric_bound |x_i - x~_j| > 0.5|x_i - x_j| for separated pairs
///   radius_bound    R_x(t) <= R_x^0
///   dx_monotone     d_x nonincreasing (asserted in 1D; recorded in multi-D)
///   speed_bound     per-agent displacement <= s*dt
/// Failures name the violated check; monotonicity slack scales with
/// max(1, d_x(0)).
std::vector<AuditRecord> audit_step(const StepRecord& rec, double R0, double d0, double prev_dx,
                                    const AuditOptions& opts = {});

/// Step observer that runs audit_step and accumulates a summary.
class StepAuditor {
public:
    explicit StepAuditor(const SystemState& initial, AuditOptions opts = {});

    void operator()(const StepRecord& rec);
    const AuditSummary& summary() const { return summary_; }

private:
    AuditOptions opts_;
    double r0_;
    double d0_;
    double prev_dx_;
    AuditSummary summary_;
};

}  // namespace hkc
