#pragma once

#include <string>
#include <tuple>
#include <vector>

#include "hkc/analysis.hpp"
#include "hkc/integrator.hpp"
#include "hkc/scenario.hpp"

namespace hkc {

/// Rows (agent_id, t, x_0, ..., x_{d-1}) sorted by (agent_id, t).
void write_trajectory_csv(const std::string& path, const SimTrace& trace,
                          const std::string& config_tag);

/// Rows (t, d_x, R_x, tau_min, tau_max).
void write_metrics_csv(const std::string& path, const SimTrace& trace,
                       const std::string& config_tag);

/// Rows (t, check_name, margin, pass).
void write_audit_csv(const std::string& path, const std::vector<AuditRecord>& records,
                     const std::string& config_tag);

/// Per-pair delay audit rows (t, i, j, tau, lo, hi, residual).
void write_delay_csv(const std::string& path,
                     const std::vector<std::tuple<double, int, int, DelayResult>>& rows,
                     const std::string& config_tag);

/// Datum file: header (N, d, c, s, S0, psi spec) + trajectory CSV rows.
void save_datum(const std::string& path, const InitialDatum& datum, double c,
                const InfluenceCertificate& psi);

struct LoadedDatum {
    InitialDatum datum;
    double c = 0.0;
    InfluenceCertificate psi;
};

/// Loads and re-validates a datum file (the kernel is re-certified, each
/// trajectory Lipschitz-checked on ingestion).
LoadedDatum load_datum(const std::string& path);

}  // namespace hkc
