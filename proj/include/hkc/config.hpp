#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hkc/vec.hpp"

namespace hkc {

struct ModelConfig {
    int n = 0;
    int dim = 1;
    double c = 0.0;
};

struct PsiConfig {
    std::string kind;
    std::vector<double> params;
    std::optional<double> r_max;  ///< default: 2*(R_x^0 + d_x(0))
};

struct ScenarioConfig {
    std::string kind;  ///< constant | linear | random | file
    std::uint64_t seed = 1;
    double box_radius = 1.0;
    std::vector<Vec> positions;   ///< constant/linear kinds
    std::vector<Vec> velocities;  ///< linear kind
    std::string path;             ///< file kind: datum file
};

struct IntegratorConfig {
    std::string scheme = "heun";
    std::optional<double> dt;  ///< default derived from the model
    double T = 0.0;
    double picard_tol = 1e-9;
    int picard_max_iter = 200;
};

struct OutputConfig {
    std::string trajectory;  ///< CSV paths; empty = not written
    std::string metrics;
    std::string audit;
    std::string delays;
    double eps_rel = 1e-3;  ///< consensus threshold as a fraction of d_x(0)
    std::string out_dir;    ///< prepended to relative output paths
};

/// One self-describing run configuration (JSON file). Flags only override.
struct RunConfig {
    ModelConfig model;
    PsiConfig psi;
    ScenarioConfig scenario;
    IntegratorConfig integrator;
    OutputConfig outputs;
};

/// Parses a config file. Unknown keys or malformed values throw
/// std::invalid_argument naming the offending field.
RunConfig load_run_config(const std::string& path);
RunConfig parse_run_config(const std::string& json_text);

/// Structural validation (field presence, positivity, file existence).
/// Returns the failing field description, or nullopt when valid.
std::optional<std::string> check_run_config(const RunConfig& cfg);

/// FNV-1a hash of the canonical serialized config; stamped into every
/// output CSV so emitted files are traceable to their exact inputs.
std::string config_hash(const RunConfig& cfg);
std::string serialize_run_config(const RunConfig& cfg);

}  // namespace hkc
