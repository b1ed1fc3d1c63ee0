#include "hkc/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "hkc/errors.hpp"

namespace hkc {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
}

std::ofstream open_out(const std::string& path) {
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write: " + path);
    return out;
}

void write_tag(std::ofstream& out, const std::string& config_tag) {
    if (!config_tag.empty()) out << "# config=" << config_tag << "\n";
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, sep)) out.push_back(field);
    return out;
}

}  // namespace

void write_trajectory_csv(const std::string& path, const SimTrace& trace,
                          const std::string& config_tag) {
    auto out = open_out(path);
    write_tag(out, config_tag);
    out << "agent_id,t";
    for (int k = 0; k < trace.dim; ++k) out << ",x_" << k;
    out << "\n";
    for (int i = 0; i < trace.n_agents; ++i) {
        for (std::size_t row = 0; row < trace.rows(); ++row) {
            out << i << ',' << fmt(trace.times[row]);
            const Vec& p = trace.positions[row][static_cast<std::size_t>(i)];
            for (double x : p) out << ',' << fmt(x);
            out << "\n";
        }
    }
}

void write_metrics_csv(const std::string& path, const SimTrace& trace,
                       const std::string& config_tag) {
    auto out = open_out(path);
    write_tag(out, config_tag);
    out << "t,d_x,R_x,tau_min,tau_max\n";
    for (std::size_t row = 0; row < trace.rows(); ++row) {
        out << fmt(trace.times[row]) << ',' << fmt(trace.diameter[row]) << ','
            << fmt(trace.radius[row]) << ',' << fmt(trace.tau_min[row]) << ','
            << fmt(trace.tau_max[row]) << "\n";
    }
}

void write_audit_csv(const std::string& path, const std::vector<AuditRecord>& records,
                     const std::string& config_tag) {
    auto out = open_out(path);
    write_tag(out, config_tag);
    out << "t,check_name,margin,pass\n";
    for (const auto& r : records)
        out << fmt(r.t) << ',' << r.check << ',' << fmt(r.margin) << ',' << (r.pass ? 1 : 0)
            << "\n";
}

void write_delay_csv(const std::string& path,
                     const std::vector<std::tuple<double, int, int, DelayResult>>& rows,
                     const std::string& config_tag) {
    auto out = open_out(path);
    write_tag(out, config_tag);
    out << "t,i,j,tau,lo,hi,residual\n";
    for (const auto& [t, i, j, d] : rows)
        out << fmt(t) << ',' << i << ',' << j << ',' << fmt(d.tau) << ',' << fmt(d.bracket_lo)
            << ',' << fmt(d.bracket_hi) << ',' << fmt(d.residual) << "\n";
}

void save_datum(const std::string& path, const InitialDatum& datum, double c,
                const InfluenceCertificate& psi) {
    auto out = open_out(path);
    const int n = static_cast<int>(datum.trajectories.size());
    const int d = datum.trajectories.front().dim();
    out << "# hkc-datum v1\n";
    out << "# N=" << n << " d=" << d << " c=" << fmt(c) << " s=" << fmt(psi.s)
        << " S0=" << fmt(datum.S0) << " r_max=" << fmt(psi.r_max) << "\n";
    out << "# psi kind=" << to_string(psi.psi.kind()) << " params=";
    const auto& params = psi.psi.params();
    for (std::size_t k = 0; k < params.size(); ++k) {
        if (k > 0) out << ';';
        out << fmt(params[k]);
    }
    out << "\n";
    out << "agent_id,t";
    for (int k = 0; k < d; ++k) out << ",x_" << k;
    out << "\n";
    for (int i = 0; i < n; ++i) {
        const auto& traj = datum.trajectories[static_cast<std::size_t>(i)];
        for (std::size_t k = 0; k < traj.size(); ++k) {
            out << i << ',' << fmt(traj.sample_time(k));
            for (double x : traj.sample_value(k)) out << ',' << fmt(x);
            out << "\n";
        }
    }
}

LoadedDatum load_datum(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read datum file: " + path);

    std::string line;
    if (!std::getline(in, line) || line.rfind("# hkc-datum", 0) != 0)
        throw std::runtime_error("datum file: missing '# hkc-datum' header");

    int n = 0, d = 0;
    double c = 0.0, s0 = 0.0, r_max = 0.0;
    {
        if (!std::getline(in, line) || line.rfind("# ", 0) != 0)
            throw std::runtime_error("datum file: missing model header");
        std::istringstream is(line.substr(2));
        std::string kv;
        while (is >> kv) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) continue;
            const std::string key = kv.substr(0, eq);
            const std::string val = kv.substr(eq + 1);
            if (key == "N") n = std::stoi(val);
            else if (key == "d") d = std::stoi(val);
            else if (key == "c") c = std::stod(val);
            else if (key == "S0") s0 = std::stod(val);
            else if (key == "r_max") r_max = std::stod(val);
            // the recorded s is informational; the kernel is re-certified below
        }
    }
    std::string kind;
    std::vector<double> params;
    {
        if (!std::getline(in, line) || line.rfind("# psi ", 0) != 0)
            throw std::runtime_error("datum file: missing psi header");
        std::istringstream is(line.substr(6));
        std::string kv;
        while (is >> kv) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) continue;
            const std::string key = kv.substr(0, eq);
            const std::string val = kv.substr(eq + 1);
            if (key == "kind") kind = val;
            else if (key == "params")
                for (const auto& p : split(val, ';')) params.push_back(std::stod(p));
        }
    }
    if (n < 2 || d < 1 || !(c > 0.0) || !(r_max > 0.0))
        throw std::runtime_error("datum file: malformed header");

    const auto psi = InfluenceFunction::from_spec(influence_kind_from_string(kind), params);
    const auto validation = validate_influence(psi, c, r_max);
    if (!validation.ok)
        throw std::runtime_error("datum file: kernel failed re-validation: " + validation.reason);

    if (!std::getline(in, line))  // column header
        throw std::runtime_error("datum file: missing column header");

    std::vector<std::vector<double>> times(static_cast<std::size_t>(n));
    std::vector<std::vector<Vec>> points(static_cast<std::size_t>(n));
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto fields = split(line, ',');
        if (fields.size() != static_cast<std::size_t>(d) + 2)
            throw std::runtime_error("datum file: bad row: " + line);
        const int agent = std::stoi(fields[0]);
        if (agent < 0 || agent >= n) throw std::runtime_error("datum file: agent id out of range");
        times[static_cast<std::size_t>(agent)].push_back(std::stod(fields[1]));
        Vec p(static_cast<std::size_t>(d));
        for (int k = 0; k < d; ++k) p[static_cast<std::size_t>(k)] = std::stod(fields[2 + k]);
        points[static_cast<std::size_t>(agent)].push_back(std::move(p));
    }

    LoadedDatum out;
    out.c = c;
    out.psi = validation.cert;
    out.datum.S0 = s0;
    for (int i = 0; i < n; ++i) {
        if (times[static_cast<std::size_t>(i)].empty())
            throw std::runtime_error("datum file: agent without samples");
        // ingestion re-checks the Lipschitz class; violations reject the file
        out.datum.trajectories.emplace_back(times[static_cast<std::size_t>(i)],
                                            points[static_cast<std::size_t>(i)],
                                            validation.cert.s);
    }
    return out;
}

}  // namespace hkc
