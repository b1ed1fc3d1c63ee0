#include "hkc/influence.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>

namespace hkc {

namespace {

constexpr double kSpeedBoundTargetError = 1e-6;
constexpr std::size_t kCoarseSamples = 4096;
constexpr std::size_t kMaxSamples = 20'000'000;

void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) throw std::invalid_argument(std::string(name) + " must be finite");
}

}  // namespace

std::string to_string(InfluenceKind k) {
    switch (k) {
        case InfluenceKind::rational: return "rational";
        case InfluenceKind::gaussian: return "gaussian";
        case InfluenceKind::affine_cutoff: return "affine-cutoff";
        case InfluenceKind::tabulated: return "tabulated";
    }
    return "?";
}

InfluenceKind influence_kind_from_string(const std::string& name) {
    if (name == "rational") return InfluenceKind::rational;
    if (name == "gaussian") return InfluenceKind::gaussian;
    if (name == "affine-cutoff" || name == "affine_cutoff") return InfluenceKind::affine_cutoff;
    if (name == "tabulated") return InfluenceKind::tabulated;
    throw std::invalid_argument("unknown influence kind: " + name);
}

InfluenceFunction::InfluenceFunction(InfluenceKind kind, std::vector<double> params,
                                     double lipschitz)
    : kind_(kind), params_(std::move(params)), lipschitz_(lipschitz) {}

InfluenceFunction InfluenceFunction::rational(double kappa, double beta) {
    require_finite(kappa, "kappa");
    require_finite(beta, "beta");
    if (kappa < 0.0) throw std::invalid_argument("rational: kappa must be >= 0");
    if (beta <= 0.0) throw std::invalid_argument("rational: beta must be > 0");
    // max |psi'| is attained at r^2 = 1/(2*beta + 1)
    const double r_star = 1.0 / std::sqrt(2.0 * beta + 1.0);
    const double lip =
        2.0 * beta * kappa * r_star * std::pow(1.0 + r_star * r_star, -(beta + 1.0));
    return InfluenceFunction(InfluenceKind::rational, {kappa, beta}, lip);
}

InfluenceFunction InfluenceFunction::gaussian(double kappa, double sigma) {
    require_finite(kappa, "kappa");
    require_finite(sigma, "sigma");
    if (kappa < 0.0) throw std::invalid_argument("gaussian: kappa must be >= 0");
    if (sigma <= 0.0) throw std::invalid_argument("gaussian: sigma must be > 0");
    // max |psi'| at r = sigma/sqrt(2)
    const double lip = kappa * std::sqrt(2.0) / sigma * std::exp(-0.5);
    return InfluenceFunction(InfluenceKind::gaussian, {kappa, sigma}, lip);
}

InfluenceFunction InfluenceFunction::affine_cutoff(double a, double b) {
    require_finite(a, "a");
    require_finite(b, "b");
    if (a < 0.0 || b < 0.0) throw std::invalid_argument("affine-cutoff: a, b must be >= 0");
    return InfluenceFunction(InfluenceKind::affine_cutoff, {a, b}, b);
}

InfluenceFunction InfluenceFunction::tabulated(
    const std::vector<std::pair<double, double>>& nodes) {
    if (nodes.size() < 2) throw std::invalid_argument("tabulated: need at least two nodes");
    if (nodes.front().first != 0.0)
        throw std::invalid_argument("tabulated: first node must be at r = 0");
    std::vector<double> flat;
    flat.reserve(nodes.size() * 2);
    double lip = 0.0;
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        require_finite(nodes[k].first, "node r");
        require_finite(nodes[k].second, "node value");
        if (nodes[k].second < 0.0) throw std::invalid_argument("tabulated: values must be >= 0");
        if (k > 0) {
            const double dr = nodes[k].first - nodes[k - 1].first;
            if (dr <= 0.0)
                throw std::invalid_argument("tabulated: node r must be strictly increasing");
            lip = std::max(lip, std::abs(nodes[k].second - nodes[k - 1].second) / dr);
        }
        flat.push_back(nodes[k].first);
        flat.push_back(nodes[k].second);
    }
    return InfluenceFunction(InfluenceKind::tabulated, std::move(flat), lip);
}

InfluenceFunction InfluenceFunction::from_spec(InfluenceKind kind,
                                               const std::vector<double>& params) {
    switch (kind) {
        case InfluenceKind::rational:
            if (params.size() == 1) return rational(params[0]);
            if (params.size() == 2) return rational(params[0], params[1]);
            throw std::invalid_argument("rational: expected params {kappa[, beta]}");
        case InfluenceKind::gaussian:
            if (params.size() != 2)
                throw std::invalid_argument("gaussian: expected params {kappa, sigma}");
            return gaussian(params[0], params[1]);
        case InfluenceKind::affine_cutoff:
            if (params.size() != 2)
                throw std::invalid_argument("affine-cutoff: expected params {a, b}");
            return affine_cutoff(params[0], params[1]);
        case InfluenceKind::tabulated: {
            if (params.size() < 4 || params.size() % 2 != 0)
                throw std::invalid_argument("tabulated: expected params {r0,v0,r1,v1,...}");
            std::vector<std::pair<double, double>> nodes;
            for (std::size_t k = 0; k + 1 < params.size(); k += 2)
                nodes.emplace_back(params[k], params[k + 1]);
            return tabulated(nodes);
        }
    }
    throw std::invalid_argument("unknown influence kind");
}

double InfluenceFunction::operator()(double r) const {
    if (!std::isfinite(r) || r < 0.0)
        throw std::domain_error("psi: r must be finite and >= 0");
    switch (kind_) {
        case InfluenceKind::rational:
            return params_[0] * std::pow(1.0 + r * r, -params_[1]);
        case InfluenceKind::gaussian: {
            const double u = r / params_[1];
            return params_[0] * std::exp(-u * u);
        }
        case InfluenceKind::affine_cutoff:
            return std::max(0.0, params_[0] - params_[1] * r);
        case InfluenceKind::tabulated: {
            const std::size_t n = params_.size() / 2;
            if (r >= params_[2 * (n - 1)]) return params_[2 * (n - 1) + 1];
            // find segment: params_ = r0,v0,r1,v1,...
            std::size_t lo = 0, hi = n - 1;
            while (hi - lo > 1) {
                const std::size_t mid = (lo + hi) / 2;
                if (params_[2 * mid] <= r)
                    lo = mid;
                else
                    hi = mid;
            }
            const double r0 = params_[2 * lo], v0 = params_[2 * lo + 1];
            const double r1 = params_[2 * hi], v1 = params_[2 * hi + 1];
            const double w = (r - r0) / (r1 - r0);
            return v0 + w * (v1 - v0);
        }
    }
    throw std::logic_error("unreachable influence kind");
}

namespace {

struct SpeedScan {
    double s_upper = 0.0;    ///< certified upper bound of sup psi(r)r
    double psi_upper = 0.0;  ///< certified upper bound of sup psi
    double r_at_max = 0.0;   ///< grid argmax of psi(r)r
    double psi_min_pos = 0.0;  ///< smallest sampled psi on (0, r_max]
    double r_at_psi_min = 0.0;
};

/// Exact sup of psi(r)*r over [0, r_max] for a piecewise-linear kernel:
/// on each segment psi(r)*r is quadratic, so the max is at an endpoint or
/// the interior vertex.
SpeedScan scan_tabulated(const InfluenceFunction& f, double r_max) {
    const auto& p = f.params();
    const std::size_t n = p.size() / 2;
    SpeedScan out;
    out.psi_min_pos = std::numeric_limits<double>::infinity();
    auto consider = [&](double r) {
        if (r < 0.0 || r > r_max) return;
        const double v = f(r);
        const double g = v * r;
        if (g > out.s_upper) {
            out.s_upper = g;
            out.r_at_max = r;
        }
        out.psi_upper = std::max(out.psi_upper, v);
        if (r > 0.0 && v < out.psi_min_pos) {
            out.psi_min_pos = v;
            out.r_at_psi_min = r;
        }
    };
    consider(0.0);
    consider(r_max);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double r0 = p[2 * k], v0 = p[2 * k + 1];
        const double r1 = p[2 * k + 2], v1 = p[2 * k + 3];
        consider(std::min(r1, r_max));
        // psi(r)r = (v0 + m(r - r0)) r with m = slope: vertex of the parabola
        const double m = (v1 - v0) / (r1 - r0);
        if (m != 0.0) {
            const double r_vertex = (m * r0 - v0) / (2.0 * m);
            if (r_vertex > r0 && r_vertex < r1) consider(r_vertex);
        }
        if (r0 >= r_max) break;
    }
    // beyond the last node psi is constant, psi*r increasing: r_max covers it
    return out;
}

SpeedScan scan_grid(const InfluenceFunction& f, double r_max) {
    const double lip = f.lipschitz_const();

    // pass 1: coarse estimates of sup psi(r)r and sup psi
    double g_guess = 0.0, p_guess = 0.0;
    {
        const double h0 = r_max / static_cast<double>(kCoarseSamples);
        for (std::size_t k = 0; k <= kCoarseSamples; ++k) {
            const double r = std::min(r_max, static_cast<double>(k) * h0);
            const double v = f(r);
            g_guess = std::max(g_guess, v * r);
            p_guess = std::max(p_guess, v);
        }
        p_guess += 0.5 * lip * h0;
    }

    // pass 2: pitch chosen so the certified additive error stays below target
    const double slope_bound = lip * r_max + p_guess;  // |d/dr psi(r)r| <= this
    std::size_t samples = kCoarseSamples;
    if (slope_bound > 0.0) {
        const double h_target = 2.0 * kSpeedBoundTargetError / slope_bound;
        const double want = r_max / h_target;
        samples = want > static_cast<double>(kMaxSamples)
                      ? kMaxSamples
                      : std::max(kCoarseSamples, static_cast<std::size_t>(want) + 1);
    }
    const double h = r_max / static_cast<double>(samples);

    SpeedScan out;
    out.psi_min_pos = std::numeric_limits<double>::infinity();
    double g_max = 0.0, p_max = 0.0;
    for (std::size_t k = 0; k <= samples; ++k) {
        const double r = (k == samples) ? r_max : static_cast<double>(k) * h;
        const double v = f(r);
        const double g = v * r;
        if (g > g_max) {
            g_max = g;
            out.r_at_max = r;
        }
        p_max = std::max(p_max, v);
        if (r > 0.0 && v < out.psi_min_pos) {
            out.psi_min_pos = v;
            out.r_at_psi_min = r;
        }
    }
    out.psi_upper = p_max + 0.5 * lip * h;
    out.s_upper = g_max + 0.5 * (lip * r_max + out.psi_upper) * h;
    return out;
}

SpeedScan scan(const InfluenceFunction& f, double r_max) {
    return f.kind() == InfluenceKind::tabulated ? scan_tabulated(f, r_max) : scan_grid(f, r_max);
}

}  // namespace

double effective_speed_bound(const InfluenceFunction& f, double r_max) {
    if (!std::isfinite(r_max) || r_max <= 0.0)
        throw std::invalid_argument("effective_speed_bound: r_max must be > 0");
    return scan(f, r_max).s_upper;
}

InfluenceValidation validate_influence(const InfluenceFunction& f, double c, double r_max) {
    if (!std::isfinite(c) || c <= 0.0)
        throw std::invalid_argument("validate_influence: c must be > 0");
    if (!std::isfinite(r_max) || r_max <= 0.0)
        throw std::invalid_argument("validate_influence: r_max must be > 0");

    InfluenceValidation out;
    if (f(0.0) < 0.0) {
        out.reason = "psi(0) < 0";
        return out;
    }

    // positivity + Lipschitz spot checks
    const std::size_t spots = 2048;
    const double h = r_max / static_cast<double>(spots);
    double prev = f(0.0);
    const double lip_slack = f.lipschitz_const() * h * (1.0 + 1e-9) + 1e-15;
    for (std::size_t k = 1; k <= spots; ++k) {
        const double r = (k == spots) ? r_max : static_cast<double>(k) * h;
        const double v = f(r);
        if (!(v > 0.0)) {
            out.reason = "psi must be positive for r > 0";
            out.violating_r = r;
            return out;
        }
        if (std::abs(v - prev) > lip_slack) {
            out.reason = "Lipschitz spot check failed";
            out.violating_r = r;
            return out;
        }
        prev = v;
    }

    const SpeedScan sc = scan(f, r_max);
    if (!(sc.s_upper < c)) {
        out.reason = "speed bound violated: sup psi(r)r >= c";
        out.violating_r = sc.r_at_max;
        return out;
    }

    out.ok = true;
    out.cert = InfluenceCertificate{f, sc.s_upper, sc.psi_upper, r_max};
    return out;
}

}  // namespace hkc
