#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hkc/run.hpp"

namespace {

struct Overrides {
    std::optional<double> dt;
    std::optional<double> T;
    std::optional<std::string> scheme;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
};

hkc::RunConfig load_with_overrides(const std::string& path, const Overrides& ov) {
    hkc::RunConfig cfg = hkc::load_run_config(path);
    if (ov.dt) cfg.integrator.dt = *ov.dt;
    if (ov.T) cfg.integrator.T = *ov.T;
    if (ov.scheme) cfg.integrator.scheme = *ov.scheme;
    if (ov.seed) cfg.scenario.seed = *ov.seed;
    if (ov.out_dir) cfg.outputs.out_dir = *ov.out_dir;
    return cfg;
}

void add_override_flags(CLI::App* cmd, Overrides& ov) {
    cmd->add_option("--dt", [&ov](const std::vector<std::string>& v) {
        ov.dt = std::stod(v.front());
        return true;
    }, "override integrator.dt");
    cmd->add_option("--T", [&ov](const std::vector<std::string>& v) {
        ov.T = std::stod(v.front());
        return true;
    }, "override integrator.T");
    cmd->add_option("--scheme", [&ov](const std::vector<std::string>& v) {
        ov.scheme = v.front();
        return true;
    }, "override integrator.scheme (euler|heun|picard)");
    cmd->add_option("--seed", [&ov](const std::vector<std::string>& v) {
        ov.seed = static_cast<std::uint64_t>(std::stoull(v.front()));
        return true;
    }, "override scenario.seed");
    cmd->add_option("--out-dir", [&ov](const std::vector<std::string>& v) {
        ov.out_dir = v.front();
        return true;
    }, "directory for relative output paths");
}

void print_summary(const hkc::RunSummary& s) {
    std::printf("config           %s\n", s.hash.c_str());
    std::printf("certified s      %.12g\n", s.s);
    std::printf("S0               %.12g\n", s.S0);
    std::printf("dt / T           %.12g / %.12g\n", s.dt, s.T);
    if (s.consensus_time)
        std::printf("consensus_time   %.12g\n", *s.consensus_time);
    else
        std::printf("consensus_time   (not reached)\n");
    const auto& c = s.certificate;
    std::printf("certificate      psi_lo=%.9g psi_hi=%.9g lambda=%.9g condition_met=%s on [%g, %g]\n",
                c.psi_lo, c.psi_hi, c.lambda, c.condition_met ? "yes" : "no", c.range_lo,
                c.range_hi);
    if (!c.range_note.empty()) std::printf("                 note: %s\n", c.range_note.c_str());
    std::printf("audits           %ld checks, %ld failures\n", s.audits.checks,
                s.audits.failures);
    for (const auto& [name, margin] : s.audits.worst_margins)
        std::printf("                 %-16s worst margin %.3e\n", name.c_str(), margin);
    for (const auto& f : s.written_files) std::printf("wrote            %s\n", f.c_str());
    std::printf("%s\n", s.message.c_str());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"delayed Hegselmann-Krause consensus simulator"};
    app.require_subcommand(1);

    std::string config_path;
    Overrides ov;

    auto* cmd_run = app.add_subcommand("run", "run a scenario and emit traces/metrics/audits");
    cmd_run->add_option("config", config_path, "config file (JSON)")->required();
    add_override_flags(cmd_run, ov);

    auto* cmd_validate = app.add_subcommand("validate", "validate a config and its kernel");
    cmd_validate->add_option("config", config_path, "config file (JSON)")->required();

    std::vector<std::string> schemes;
    auto* cmd_compare = app.add_subcommand("compare", "run several schemes on one datum");
    cmd_compare->add_option("config", config_path, "config file (JSON)")->required();
    cmd_compare->add_option("--schemes", schemes, "schemes to compare")->required()
        ->expected(2, 3);
    add_override_flags(cmd_compare, ov);

    std::string datum_out = "datum.csv";
    auto* cmd_gen = app.add_subcommand("gen-scenario", "generate a scenario datum file");
    cmd_gen->add_option("config", config_path, "config file (JSON)")->required();
    cmd_gen->add_option("--out", datum_out, "output datum path");
    add_override_flags(cmd_gen, ov);

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_run->parsed()) {
            const auto summary = hkc::run(load_with_overrides(config_path, ov));
            if (summary.exit_code == hkc::exit_validation_failure) {
                std::fprintf(stderr, "error: %s\n", summary.message.c_str());
                return summary.exit_code;
            }
            print_summary(summary);
            return summary.exit_code;
        }
        if (cmd_validate->parsed()) {
            const auto summary = hkc::validate_only(hkc::load_run_config(config_path));
            std::printf("%s\n", summary.message.c_str());
            return summary.exit_code;
        }
        if (cmd_compare->parsed()) {
            const auto report = hkc::compare(load_with_overrides(config_path, ov), schemes);
            if (report.exit_code != hkc::exit_ok) {
                std::printf("%s\n", report.message.c_str());
                return report.exit_code;
            }
            for (const auto& cmp : report.pairwise)
                std::printf("gap  %-8s vs %-8s  sup|x_a - x_b| = %.6e\n", cmp.scheme_a.c_str(),
                            cmp.scheme_b.c_str(), cmp.sup_gap);
            for (const auto& est : report.orders)
                std::printf("order %-8s  |dt-dt/2| = %.6e  |dt/2-dt/4| = %.6e  ratio = %.3f\n",
                            est.scheme.c_str(), est.endpoint_gap_coarse, est.endpoint_gap_fine,
                            est.richardson_ratio);
            return report.exit_code;
        }
        if (cmd_gen->parsed()) {
            const auto summary =
                hkc::generate_scenario(load_with_overrides(config_path, ov), datum_out);
            std::printf("%s\n", summary.message.c_str());
            return summary.exit_code;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return hkc::exit_validation_failure;
    }
    return 0;
}
