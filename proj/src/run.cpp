#include "hkc/run.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <memory>
#include <sstream>

#include "hkc/errors.hpp"
#include "hkc/io.hpp"
#include "hkc/scenario.hpp"

namespace hkc {

namespace {

struct BuiltScenario {
    InitialDatum datum;
    InfluenceCertificate cert;
    double c = 0.0;
};

InitialDatum build_datum(const RunConfig& cfg, const InfluenceCertificate& cert) {
    const auto& sc = cfg.scenario;
    if (sc.kind == "constant") return constant_history(sc.positions, cfg.model.c, cert);
    if (sc.kind == "linear")
        return linear_history(sc.positions, sc.velocities, cfg.model.c, cert);
    if (sc.kind == "random")
        return random_lipschitz_history(sc.seed, cfg.model.n, cfg.model.dim, sc.box_radius,
                                        cfg.model.c, cert);
    throw std::invalid_argument("scenario.kind: unknown kind '" + sc.kind + "'");
}

/// Certifies the kernel and builds the datum. The default validation range
/// 2*(R_x^0 + d_x(0)) depends on the datum, whose window length depends on
/// the certified s, so the two are iterated to a fixed point.
BuiltScenario build_scenario(const RunConfig& cfg) {
    if (cfg.scenario.kind == "file") {
        LoadedDatum loaded = load_datum(cfg.scenario.path);
        return BuiltScenario{std::move(loaded.datum), std::move(loaded.psi), loaded.c};
    }

    const auto psi = InfluenceFunction::from_spec(influence_kind_from_string(cfg.psi.kind),
                                                  cfg.psi.params);
    const double c = cfg.model.c;

    double r_max;
    if (cfg.psi.r_max) {
        r_max = *cfg.psi.r_max;
    } else {
        // seed the iteration from the t = 0 positions alone
        const std::vector<Vec> pos =
            cfg.scenario.kind == "random"
                ? sample_box_positions(cfg.scenario.seed, cfg.model.n, cfg.model.dim,
                                       cfg.scenario.box_radius)
                : cfg.scenario.positions;
        if (pos.size() < 2) throw std::invalid_argument("scenario.positions: need at least two");
        const double d0 = diameter(pos);
        r_max = std::max(1e-6, 2.0 * (radius(pos) + d0));
    }

    const bool user_range = cfg.psi.r_max.has_value();
    for (int pass = 0; pass < 6; ++pass) {
        const auto validation = validate_influence(psi, c, r_max);
        if (!validation.ok) {
            std::ostringstream os;
            os << "influence validation failed: " << validation.reason << " (at r="
               << validation.violating_r << ", r_max=" << r_max
               << "); the subluminal condition requires sup psi(r)*r < c";
            throw std::invalid_argument(os.str());
        }
        InitialDatum datum = build_datum(cfg, validation.cert);
        const double R0 = radius_over_window(datum.trajectories);
        std::vector<Vec> pos;
        for (const auto& traj : datum.trajectories) pos.push_back(traj.frontier_value());
        const double d0 = diameter(pos);
        const double r_need = 2.0 * (R0 + d0);
        if (user_range || r_max >= r_need * (1.0 - 1e-12))
            return BuiltScenario{std::move(datum), validation.cert, c};
        r_max = r_need * 1.05;
    }
    throw std::invalid_argument("psi.r_max: default range iteration did not converge");
}

std::string resolve_path(const OutputConfig& out, const std::string& path) {
    if (path.empty()) return path;
    std::filesystem::path p(path);
    if (!out.out_dir.empty() && p.is_relative())
        return (std::filesystem::path(out.out_dir) / p).string();
    return p.string();
}

}  // namespace

RunSummary validate_only(const RunConfig& cfg) {
    RunSummary summary;
    summary.hash = config_hash(cfg);
    if (auto err = check_run_config(cfg)) {
        summary.exit_code = exit_validation_failure;
        summary.message = *err;
        return summary;
    }
    try {
        const BuiltScenario built = build_scenario(cfg);
        summary.s = built.cert.s;
        summary.S0 = built.datum.S0;
        std::ostringstream os;
        os << "valid: s=" << built.cert.s << " (r_max=" << built.cert.r_max
           << "), c=" << built.c << ", S0=" << built.datum.S0 << ", N="
           << built.datum.trajectories.size();
        summary.message = os.str();
    } catch (const std::exception& e) {
        summary.exit_code = exit_validation_failure;
        summary.message = e.what();
    }
    return summary;
}

RunSummary generate_scenario(const RunConfig& cfg, const std::string& out_path) {
    RunSummary summary = validate_only(cfg);
    if (summary.exit_code != exit_ok) return summary;
    try {
        const BuiltScenario built = build_scenario(cfg);
        const std::string path = resolve_path(cfg.outputs, out_path);
        save_datum(path, built.datum, built.c, built.cert);
        summary.written_files.push_back(path);
        summary.message = "datum written: " + path;
    } catch (const std::exception& e) {
        summary.exit_code = exit_runtime_failure;
        summary.message = e.what();
    }
    return summary;
}

RunSummary run(const RunConfig& cfg) {
    RunSummary summary;
    summary.hash = config_hash(cfg);
    if (auto err = check_run_config(cfg)) {
        summary.exit_code = exit_validation_failure;
        summary.message = *err;
        return summary;
    }
    if (!(cfg.integrator.T > 0.0)) {
        summary.exit_code = exit_validation_failure;
        summary.message = "integrator.T: must be > 0 for a run";
        return summary;
    }

    BuiltScenario built;
    try {
        built = build_scenario(cfg);
    } catch (const std::exception& e) {
        summary.exit_code = exit_validation_failure;
        summary.message = e.what();
        return summary;
    }

    try {
        SystemState state = make_state(built.datum, built.c, built.cert);
        summary.s = built.cert.s;
        summary.S0 = built.datum.S0;

        const double dt = cfg.integrator.dt
                              ? *cfg.integrator.dt
                              : default_dt(built.c, built.cert.s, built.cert.psi_sup,
                                           built.datum.S0);
        const double T = std::max(cfg.integrator.T, dt);
        summary.dt = dt;
        summary.T = T;

        IntegrateOptions opts;
        opts.scheme = scheme_from_string(cfg.integrator.scheme);
        opts.picard_tol = cfg.integrator.picard_tol;
        opts.picard_max_iter = cfg.integrator.picard_max_iter;

        AuditOptions audit_opts;
        audit_opts.keep_all_records = !cfg.outputs.audit.empty();
        auto auditor = std::make_shared<StepAuditor>(state, audit_opts);
        opts.observers.push_back([auditor](const StepRecord& rec) { (*auditor)(rec); });

        auto delay_rows =
            std::make_shared<std::vector<std::tuple<double, int, int, DelayResult>>>();
        if (!cfg.outputs.delays.empty()) {
            opts.observers.push_back([delay_rows](const StepRecord& rec) {
                const auto& delays = *rec.delays;
                const int n = static_cast<int>(delays.size());
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) {
                        if (i == j) continue;
                        delay_rows->emplace_back(rec.t_before, i, j,
                                                 delays[static_cast<std::size_t>(i)]
                                                       [static_cast<std::size_t>(j)]);
                    }
            });
        }

        const double d0 = state.initial_diameter;
        const double R0 = state.initial_radius;
        IntegrateResult result = integrate(state, T, dt, opts);

        summary.trace = std::move(result.trace);
        summary.audits = auditor->summary();
        summary.consensus_time = consensus_time(summary.trace, cfg.outputs.eps_rel * d0);
        summary.certificate = decay_certificate(built.cert, built.c, state.n_agents, R0);

        const std::string tag = summary.hash;
        if (!cfg.outputs.trajectory.empty()) {
            const auto path = resolve_path(cfg.outputs, cfg.outputs.trajectory);
            write_trajectory_csv(path, summary.trace, tag);
            summary.written_files.push_back(path);
        }
        if (!cfg.outputs.metrics.empty()) {
            const auto path = resolve_path(cfg.outputs, cfg.outputs.metrics);
            write_metrics_csv(path, summary.trace, tag);
            summary.written_files.push_back(path);
        }
        if (!cfg.outputs.audit.empty()) {
            const auto path = resolve_path(cfg.outputs, cfg.outputs.audit);
            write_audit_csv(path, summary.audits.all_records, tag);
            summary.written_files.push_back(path);
        }
        if (!cfg.outputs.delays.empty()) {
            const auto path = resolve_path(cfg.outputs, cfg.outputs.delays);
            write_delay_csv(path, *delay_rows, tag);
            summary.written_files.push_back(path);
        }

        std::ostringstream os;
        if (!result.ok) {
            summary.exit_code = exit_runtime_failure;
            os << "integration failed: " << result.error;
        } else if (!summary.audits.all_passed()) {
            summary.exit_code = exit_audit_failure;
            os << "audit failures: " << summary.audits.failures << " of "
               << summary.audits.checks << " checks";
        } else {
            os << "ok: " << summary.trace.rows() - 1 << " steps, audits "
               << summary.audits.checks << "/" << summary.audits.checks << " passed";
        }
        summary.message = os.str();
    } catch (const std::exception& e) {
        summary.exit_code = exit_runtime_failure;
        summary.message = e.what();
    }
    return summary;
}

CompareReport compare(const RunConfig& cfg, const std::vector<std::string>& schemes) {
    CompareReport report;
    if (schemes.size() < 2) {
        report.exit_code = exit_validation_failure;
        report.message = "compare: need at least two schemes";
        return report;
    }
    if (auto err = check_run_config(cfg)) {
        report.exit_code = exit_validation_failure;
        report.message = *err;
        return report;
    }

    try {
        const BuiltScenario built = build_scenario(cfg);
        const double dt = cfg.integrator.dt
                              ? *cfg.integrator.dt
                              : default_dt(built.c, built.cert.s, built.cert.psi_sup,
                                           built.datum.S0);
        const double T = std::max(cfg.integrator.T, dt);

        auto run_scheme = [&](const std::string& name, double h) {
            SystemState state = make_state(built.datum, built.c, built.cert);
            IntegrateOptions opts;
            opts.scheme = scheme_from_string(name);
            opts.picard_tol = cfg.integrator.picard_tol;
            opts.picard_max_iter = cfg.integrator.picard_max_iter;
            IntegrateResult res = integrate(state, T, h, opts);
            if (!res.ok) throw std::runtime_error(name + ": " + res.error);
            return res.trace;
        };

        std::vector<SimTrace> base_traces;
        for (const auto& name : schemes) {
            const SimTrace coarse = run_scheme(name, dt);
            const SimTrace mid = run_scheme(name, dt / 2.0);
            const SimTrace fine = run_scheme(name, dt / 4.0);
            OrderEstimate est;
            est.scheme = name;
            const auto endpoint_gap = [](const SimTrace& a, const SimTrace& b) {
                double g = 0.0;
                for (int i = 0; i < a.n_agents; ++i)
                    g = std::max(g, dist(a.positions.back()[static_cast<std::size_t>(i)],
                                         b.positions.back()[static_cast<std::size_t>(i)]));
                return g;
            };
            est.endpoint_gap_coarse = endpoint_gap(coarse, mid);
            est.endpoint_gap_fine = endpoint_gap(mid, fine);
            est.richardson_ratio = est.endpoint_gap_fine > 0.0
                                       ? est.endpoint_gap_coarse / est.endpoint_gap_fine
                                       : 0.0;
            report.orders.push_back(est);
            base_traces.push_back(coarse);
        }

        for (std::size_t a = 0; a < schemes.size(); ++a) {
            for (std::size_t b = a + 1; b < schemes.size(); ++b) {
                SchemeComparison cmp;
                cmp.scheme_a = schemes[a];
                cmp.scheme_b = schemes[b];
                const auto& ta = base_traces[a];
                const auto& tb = base_traces[b];
                const std::size_t rows = std::min(ta.rows(), tb.rows());
                for (std::size_t row = 0; row < rows; ++row)
                    for (int i = 0; i < ta.n_agents; ++i)
                        cmp.sup_gap = std::max(
                            cmp.sup_gap, dist(ta.positions[row][static_cast<std::size_t>(i)],
                                              tb.positions[row][static_cast<std::size_t>(i)]));
                report.pairwise.push_back(cmp);
            }
        }
        report.message = "ok";
    } catch (const std::exception& e) {
        report.exit_code = exit_runtime_failure;
        report.message = e.what();
    }
    return report;
}

}  // namespace hkc
