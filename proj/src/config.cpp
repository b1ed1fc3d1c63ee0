#include "hkc/config.hpp"

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "hkc/integrator.hpp"

namespace hkc {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& why) {
    throw std::invalid_argument("config field '" + field + "': " + why);
}

double get_number(const json& j, const std::string& field) {
    if (!j.is_number()) fail(field, "expected a number");
    return j.get<double>();
}

std::vector<Vec> get_vec_list(const json& j, const std::string& field) {
    if (!j.is_array()) fail(field, "expected an array of coordinate arrays");
    std::vector<Vec> out;
    for (const auto& row : j) {
        if (row.is_number()) {
            out.push_back(Vec{row.get<double>()});
        } else if (row.is_array()) {
            Vec v;
            for (const auto& x : row) {
                if (!x.is_number()) fail(field, "expected numeric coordinates");
                v.push_back(x.get<double>());
            }
            out.push_back(std::move(v));
        } else {
            fail(field, "expected numbers or coordinate arrays");
        }
    }
    return out;
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config parse error: ") + e.what());
    }

    RunConfig cfg;
    if (root.contains("model")) {
        const auto& m = root["model"];
        if (m.contains("N")) cfg.model.n = m["N"].get<int>();
        if (m.contains("dim")) cfg.model.dim = m["dim"].get<int>();
        if (m.contains("c")) cfg.model.c = get_number(m["c"], "model.c");
    }
    if (root.contains("psi")) {
        const auto& p = root["psi"];
        if (!p.contains("kind")) fail("psi.kind", "required");
        cfg.psi.kind = p["kind"].get<std::string>();
        if (p.contains("params")) {
            for (const auto& x : p["params"]) cfg.psi.params.push_back(get_number(x, "psi.params"));
        }
        if (p.contains("r_max")) cfg.psi.r_max = get_number(p["r_max"], "psi.r_max");
    }
    if (root.contains("scenario")) {
        const auto& s = root["scenario"];
        if (!s.contains("kind")) fail("scenario.kind", "required");
        cfg.scenario.kind = s["kind"].get<std::string>();
        if (s.contains("seed")) cfg.scenario.seed = s["seed"].get<std::uint64_t>();
        if (s.contains("box_radius"))
            cfg.scenario.box_radius = get_number(s["box_radius"], "scenario.box_radius");
        if (s.contains("positions"))
            cfg.scenario.positions = get_vec_list(s["positions"], "scenario.positions");
        if (s.contains("velocities"))
            cfg.scenario.velocities = get_vec_list(s["velocities"], "scenario.velocities");
        if (s.contains("path")) cfg.scenario.path = s["path"].get<std::string>();
    }
    if (root.contains("integrator")) {
        const auto& i = root["integrator"];
        if (i.contains("scheme")) cfg.integrator.scheme = i["scheme"].get<std::string>();
        if (i.contains("dt")) cfg.integrator.dt = get_number(i["dt"], "integrator.dt");
        if (i.contains("T")) cfg.integrator.T = get_number(i["T"], "integrator.T");
        if (i.contains("picard_tol"))
            cfg.integrator.picard_tol = get_number(i["picard_tol"], "integrator.picard_tol");
        if (i.contains("picard_max_iter"))
            cfg.integrator.picard_max_iter = i["picard_max_iter"].get<int>();
    }
    if (root.contains("outputs")) {
        const auto& o = root["outputs"];
        if (o.contains("trajectory")) cfg.outputs.trajectory = o["trajectory"].get<std::string>();
        if (o.contains("metrics")) cfg.outputs.metrics = o["metrics"].get<std::string>();
        if (o.contains("audit")) cfg.outputs.audit = o["audit"].get<std::string>();
        if (o.contains("delays")) cfg.outputs.delays = o["delays"].get<std::string>();
        if (o.contains("eps_rel")) cfg.outputs.eps_rel = get_number(o["eps_rel"], "outputs.eps_rel");
        if (o.contains("out_dir")) cfg.outputs.out_dir = o["out_dir"].get<std::string>();
    }
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config file not readable: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_run_config(buf.str());
}

std::optional<std::string> check_run_config(const RunConfig& cfg) {
    if (cfg.psi.kind.empty()) return "psi.kind: required";
    if (cfg.scenario.kind.empty()) return "scenario.kind: required";
    const bool from_file = cfg.scenario.kind == "file";
    if (from_file) {
        if (cfg.scenario.path.empty()) return "scenario.path: required for kind 'file'";
        if (!std::filesystem::exists(cfg.scenario.path))
            return "scenario.path: file does not exist: " + cfg.scenario.path;
    } else {
        if (!(cfg.model.c > 0.0)) return "model.c: must be > 0";
        if (cfg.model.dim < 1) return "model.dim: must be >= 1";
    }
    if (cfg.scenario.kind == "random") {
        if (cfg.model.n < 2) return "model.N: must be >= 2";
        if (!(cfg.scenario.box_radius > 0.0)) return "scenario.box_radius: must be > 0";
    }
    if (cfg.scenario.kind == "constant" || cfg.scenario.kind == "linear") {
        if (cfg.scenario.positions.size() < 2) return "scenario.positions: need at least two";
        for (const auto& p : cfg.scenario.positions)
            if (static_cast<int>(p.size()) != cfg.model.dim)
                return "scenario.positions: coordinate count must match model.dim";
        if (cfg.scenario.kind == "linear") {
            if (cfg.scenario.velocities.size() != cfg.scenario.positions.size())
                return "scenario.velocities: one per agent required";
            for (const auto& v : cfg.scenario.velocities)
                if (static_cast<int>(v.size()) != cfg.model.dim)
                    return "scenario.velocities: coordinate count must match model.dim";
        }
    }
    if (cfg.integrator.T < 0.0) return "integrator.T: must be >= 0";
    if (cfg.integrator.dt && !(*cfg.integrator.dt > 0.0)) return "integrator.dt: must be > 0";
    if (!(cfg.integrator.picard_tol > 0.0)) return "integrator.picard_tol: must be > 0";
    if (!(cfg.outputs.eps_rel > 0.0)) return "outputs.eps_rel: must be > 0";
    if (cfg.psi.r_max && !(*cfg.psi.r_max > 0.0)) return "psi.r_max: must be > 0";
    try {
        scheme_from_string(cfg.integrator.scheme);
    } catch (const std::exception& e) {
        return std::string("integrator.scheme: ") + e.what();
    }
    return std::nullopt;
}

std::string serialize_run_config(const RunConfig& cfg) {
    json root;
    root["model"] = {{"N", cfg.model.n}, {"dim", cfg.model.dim}, {"c", cfg.model.c}};
    root["psi"] = {{"kind", cfg.psi.kind}, {"params", cfg.psi.params}};
    if (cfg.psi.r_max) root["psi"]["r_max"] = *cfg.psi.r_max;
    json sc = {{"kind", cfg.scenario.kind}, {"seed", cfg.scenario.seed}};
    if (!cfg.scenario.positions.empty()) sc["positions"] = cfg.scenario.positions;
    if (!cfg.scenario.velocities.empty()) sc["velocities"] = cfg.scenario.velocities;
    if (!cfg.scenario.path.empty()) sc["path"] = cfg.scenario.path;
    if (cfg.scenario.kind == "random") sc["box_radius"] = cfg.scenario.box_radius;
    root["scenario"] = sc;
    json ic = {{"scheme", cfg.integrator.scheme},
               {"T", cfg.integrator.T},
               {"picard_tol", cfg.integrator.picard_tol},
               {"picard_max_iter", cfg.integrator.picard_max_iter}};
    if (cfg.integrator.dt) ic["dt"] = *cfg.integrator.dt;
    root["integrator"] = ic;
    root["outputs"] = {{"trajectory", cfg.outputs.trajectory},
                       {"metrics", cfg.outputs.metrics},
                       {"audit", cfg.outputs.audit},
                       {"delays", cfg.outputs.delays},
                       {"eps_rel", cfg.outputs.eps_rel},
                       {"out_dir", cfg.outputs.out_dir}};
    return root.dump();
}

std::string config_hash(const RunConfig& cfg) {
    const std::string text = serialize_run_config(cfg);
    // FNV-1a, 64 bit
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

}  // namespace hkc
