#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hkc/analysis.hpp"
#include "hkc/config.hpp"
#include "hkc/integrator.hpp"

namespace hkc {

/// Process exit codes for the CLI surface.
enum ExitCode : int {
    exit_ok = 0,
    exit_validation_failure = 1,  ///< config or kernel validation failed
    exit_audit_failure = 2,       ///< run completed but an invariant audit failed
    exit_runtime_failure = 3,     ///< integration error (window, convergence, IO)
};

struct RunSummary {
    int exit_code = exit_ok;
    std::string message;
    std::string hash;
    double s = 0.0;     ///< certified speed bound
    double S0 = 0.0;    ///< initial window length
    double dt = 0.0;    ///< resolved step size
    double T = 0.0;
    std::optional<double> consensus_time;
    DecayCertificate certificate;
    AuditSummary audits;
    SimTrace trace;
    std::vector<std::string> written_files;
};

/// scenario -> integrate -> analysis, plus the configured output files.
RunSummary run(const RunConfig& cfg);

/// Validation-only path of `run`: build + certify the kernel and scenario,
/// no integration.
RunSummary validate_only(const RunConfig& cfg);

/// Builds the configured scenario and writes it as a datum file.
RunSummary generate_scenario(const RunConfig& cfg, const std::string& out_path);

struct SchemeComparison {
    std::string scheme_a, scheme_b;
    double sup_gap = 0.0;  ///< max over common times, max over agents
};

struct OrderEstimate {
    std::string scheme;
    double endpoint_gap_coarse = 0.0;  ///< |x_dt(T) - x_dt/2(T)|
    double endpoint_gap_fine = 0.0;    ///< |x_dt/2(T) - x_dt/4(T)|
    double richardson_ratio = 0.0;     ///< coarse/fine, ~2^order
};

struct CompareReport {
    int exit_code = exit_ok;
    std::string message;
    std::vector<SchemeComparison> pairwise;
    std::vector<OrderEstimate> orders;
};

/// Runs each scheme on the same datum; reports pairwise sup-norm gaps and
/// Richardson order estimates (dt, dt/2, dt/4 per scheme). Needs >= 2 schemes.
CompareReport compare(const RunConfig& cfg, const std::vector<std::string>& schemes);

}  // namespace hkc
