#include "hkc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "hkc/errors.hpp"

namespace hkc {

double diameter(const std::vector<Vec>& positions) {
    if (positions.size() < 2) throw std::invalid_argument("diameter: need at least two agents");
    double d = 0.0;
    for (std::size_t i = 0; i < positions.size(); ++i)
        for (std::size_t j = i + 1; j < positions.size(); ++j)
            d = std::max(d, dist(positions[i], positions[j]));
    return d;
}

double radius(const std::vector<Vec>& positions) {
    double r = 0.0;
    for (const auto& p : positions) r = std::max(r, norm(p));
    return r;
}

double radius_over_window(const std::vector<Trajectory>& trajectories) {
    double r = 0.0;
    for (const auto& traj : trajectories)
        for (std::size_t k = 0; k < traj.size(); ++k)
            r = std::max(r, norm(traj.sample_value(k)));
    return r;
}

bool ordering_preserved(const SimTrace& trace, double slack) {
    if (trace.dim != 1)
        throw std::invalid_argument("ordering_preserved: defined for 1D traces only");
    if (trace.rows() == 0) return true;
    const int n = trace.n_agents;
    for (std::size_t row = 0; row < trace.rows(); ++row) {
        const auto& pos = trace.positions[row];
        for (int i = 0; i + 1 < n; ++i) {
            if (pos[static_cast<std::size_t>(i)][0] >
                pos[static_cast<std::size_t>(i) + 1][0] + slack)
                return false;
        }
    }
    return true;
}

std::optional<double> consensus_time(const SimTrace& trace, double eps) {
    if (!(eps > 0.0) && eps != 0.0)
        throw std::invalid_argument("consensus_time: eps must be >= 0");
    for (std::size_t row = 0; row < trace.rows(); ++row)
        if (trace.diameter[row] <= eps) return trace.times[row];
    return std::nullopt;
}

DecayCertificate decay_certificate(const InfluenceCertificate& psi, double c, int n_agents,
                                   double R0, CertificateRange range) {
    if (n_agents < 2) throw std::invalid_argument("decay_certificate: need N >= 2");
    if (R0 < 0.0) throw std::invalid_argument("decay_certificate: R0 must be >= 0");

    DecayCertificate cert;
    cert.range_lo = 0.0;
    cert.range_hi = range == CertificateRange::initial_radius ? R0 : 2.0 * R0;
    if (range == CertificateRange::initial_radius)
        cert.range_note =
            "bounds taken over [0, R0]; pairwise and retarded distances may reach 2*R0";

    const double lip = psi.lipschitz();
    if (cert.range_hi == 0.0) {
        cert.psi_lo = cert.psi_hi = psi.psi(0.0);
    } else {
        // certified min/max: grid extrema widened by the Lipschitz pitch error
        const std::size_t samples = 200'000;
        const double h = cert.range_hi / static_cast<double>(samples);
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        for (std::size_t k = 0; k <= samples; ++k) {
            const double r = (k == samples) ? cert.range_hi : static_cast<double>(k) * h;
            const double v = psi.psi(r);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        cert.psi_lo = std::max(0.0, lo - 0.5 * lip * h);
        cert.psi_hi = hi + 0.5 * lip * h;
    }

    const double nn = static_cast<double>(n_agents) / static_cast<double>(n_agents - 1);
    cert.lambda = nn * cert.psi_lo - 2.0 * psi.s / (c - psi.s) * cert.psi_hi;
    cert.condition_met = cert.lambda > 0.0;
    return cert;
}

double AuditSummary::worst_margin(const std::string& check) const {
    for (const auto& [name, margin] : worst_margins)
        if (name == check) return margin;
    return std::numeric_limits<double>::infinity();
}

namespace {

void note_margin(AuditSummary& summary, const std::string& check, double margin) {
    for (auto& [name, worst] : summary.worst_margins) {
        if (name == check) {
            worst = std::min(worst, margin);
            return;
        }
    }
    summary.worst_margins.emplace_back(check, margin);
}

}  // namespace

std::vector<AuditRecord> audit_step(const StepRecord& rec, double R0, double d0, double prev_dx,
                                    const AuditOptions& opts) {
    std::vector<AuditRecord> out;
    const SystemState& state = *rec.state;
    const int n = state.n_agents;
    const double t = rec.t_after;
    const double slack = opts.slack;

    auto emit = [&](const char* check, double margin, bool asserted = true) {
        AuditRecord r;
        r.t = t;
        r.check = check;
        r.margin = margin;
        r.pass = !asserted || margin >= 0.0;
        out.push_back(std::move(r));
    };

    // (a) bound (11): tau inside its bracket, per pair
    double bracket_margin = std::numeric_limits<double>::infinity();
    // (b) geometric bound: the observer sees the source beyond half the
    //     current pair distance
    double geom_margin = std::numeric_limits<double>::infinity();
    const auto& delays = *rec.delays;
    const auto& x_before = *rec.x_before;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const auto& d = delays[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            bracket_margin = std::min(bracket_margin,
                                      std::min(d.tau - d.bracket_lo + slack,
                                               d.bracket_hi - d.tau + slack));
            const double pair_dist = dist(x_before[static_cast<std::size_t>(i)],
                                          x_before[static_cast<std::size_t>(j)]);
            if (pair_dist > opts.pair_distance_floor) {
                const double seen =
                    dist(x_before[static_cast<std::size_t>(i)], d.x_delayed);
                geom_margin = std::min(geom_margin, seen - 0.5 * pair_dist + slack);
            }
        }
    }
    emit("delay_bracket", bracket_margin);
    emit("geometric_bound", geom_margin);

    // (c) radius never exceeds the initial-window radius
    const double r_now = radius(*rec.x_after);
    emit("radius_bound", R0 + slack - r_now);

    // (d) diameter monotone: asserted in 1D, recorded in multi-D
    const double dx_now = diameter(*rec.x_after);
    const double mono_slack = slack * std::max(1.0, d0);
    emit("dx_monotone", prev_dx + mono_slack - dx_now, state.dim == 1);

    // (e) per-agent displacement within the certified speed bound
    double speed_margin = std::numeric_limits<double>::infinity();
    const double step_cap = state.psi.s * rec.dt * (1.0 + opts.speed_rel_slack);
    for (int i = 0; i < n; ++i) {
        const double moved = dist((*rec.x_after)[static_cast<std::size_t>(i)],
                                  x_before[static_cast<std::size_t>(i)]);
        speed_margin = std::min(speed_margin, step_cap - moved);
    }
    emit("speed_bound", speed_margin);

    return out;
}

StepAuditor::StepAuditor(const SystemState& initial, AuditOptions opts)
    : opts_(opts),
      r0_(initial.initial_radius),
      d0_(initial.initial_diameter),
      prev_dx_(initial.initial_diameter) {}

void StepAuditor::operator()(const StepRecord& rec) {
    const auto records = audit_step(rec, r0_, d0_, prev_dx_, opts_);
    for (const auto& r : records) {
        ++summary_.checks;
        if (!r.pass) {
            ++summary_.failures;
            summary_.failing.push_back(r);
        }
        note_margin(summary_, r.check, r.margin);
        if (opts_.keep_all_records) summary_.all_records.push_back(r);
    }
    prev_dx_ = diameter(*rec.x_after);
}

}  // namespace hkc
