#include "hkc/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hkc/delay.hpp"
#include "hkc/errors.hpp"

namespace hkc {

std::uint64_t Rng::next() {
    // splitmix64
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double Rng::uniform() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    constexpr double two_pi = 6.283185307179586476925286766559;
    double u1 = uniform(), u2 = uniform();
    while (u1 <= 1e-300) u1 = uniform();
    const double mag = std::sqrt(-2.0 * std::log(u1));
    have_spare_ = true;
    spare_ = mag * std::sin(two_pi * u2);
    return mag * std::cos(two_pi * u2);
}

Vec Rng::unit_vector(int dim) {
    Vec v(static_cast<std::size_t>(dim));
    double nrm = 0.0;
    while (nrm < 1e-12) {
        for (auto& vk : v) vk = normal();
        nrm = norm(v);
    }
    for (auto& vk : v) vk /= nrm;
    return v;
}

namespace {

double positions_diameter(const std::vector<Vec>& positions) {
    double d = 0.0;
    for (std::size_t i = 0; i < positions.size(); ++i)
        for (std::size_t j = i + 1; j < positions.size(); ++j)
            d = std::max(d, dist(positions[i], positions[j]));
    return d;
}

void check_positions(const std::vector<Vec>& positions) {
    if (positions.size() < 2)
        throw std::invalid_argument("scenario: at least two agents required");
    const std::size_t d = positions.front().size();
    if (d == 0) throw std::invalid_argument("scenario: dimension must be >= 1");
    for (const auto& p : positions) {
        if (p.size() != d) throw std::invalid_argument("scenario: mixed position dimensions");
        if (!all_finite(p)) throw std::invalid_argument("scenario: non-finite position");
    }
}

}  // namespace

InitialDatum constant_history(const std::vector<Vec>& positions, double c,
                              const InfluenceCertificate& psi) {
    check_positions(positions);
    if (!(psi.s < c)) throw std::invalid_argument("scenario: certified s must be < c");
    const double S0 = positions_diameter(positions) / (c - psi.s);
    InitialDatum datum;
    datum.S0 = S0;
    for (const auto& p : positions) {
        if (S0 > 0.0)
            datum.trajectories.emplace_back(std::vector<double>{-S0, 0.0},
                                            std::vector<Vec>{p, p}, psi.s);
        else
            datum.trajectories.emplace_back(0.0, p, psi.s);
    }
    return datum;
}

InitialDatum linear_history(const std::vector<Vec>& positions, const std::vector<Vec>& velocities,
                            double c, const InfluenceCertificate& psi) {
    check_positions(positions);
    if (velocities.size() != positions.size())
        throw std::invalid_argument("scenario: one velocity per agent required");
    if (!(psi.s < c)) throw std::invalid_argument("scenario: certified s must be < c");
    for (const auto& v : velocities)
        if (norm(v) > psi.s * (1.0 + 1e-12))
            throw std::invalid_argument("scenario: history speed exceeds the certified s");

    const double S0 = positions_diameter(positions) / (c - psi.s);
    InitialDatum datum;
    datum.S0 = S0;
    for (std::size_t i = 0; i < positions.size(); ++i) {
        if (S0 > 0.0) {
            Vec back = positions[i];
            add_scaled(back, -S0, velocities[i]);
            datum.trajectories.emplace_back(std::vector<double>{-S0, 0.0},
                                            std::vector<Vec>{std::move(back), positions[i]},
                                            psi.s);
        } else {
            datum.trajectories.emplace_back(0.0, positions[i], psi.s);
        }
    }
    return datum;
}

std::vector<Vec> sample_box_positions(std::uint64_t seed, int n, int dim, double box_radius) {
    if (n < 2) throw std::invalid_argument("scenario: at least two agents required");
    if (dim < 1) throw std::invalid_argument("scenario: dimension must be >= 1");
    if (!(box_radius > 0.0)) throw std::invalid_argument("scenario: box_radius must be > 0");
    Rng rng(seed);
    std::vector<Vec> positions(static_cast<std::size_t>(n));
    for (auto& p : positions) {
        // uniform in the centered ball, so |x_i(0)| <= box_radius exactly
        p.resize(static_cast<std::size_t>(dim));
        double nrm = 0.0;
        do {
            for (auto& pk : p) pk = rng.uniform(-box_radius, box_radius);
            nrm = norm(p);
        } while (nrm > box_radius);
    }
    return positions;
}

InitialDatum random_lipschitz_history(std::uint64_t seed, int n, int dim, double box_radius,
                                      double c, const InfluenceCertificate& psi) {
    if (!(psi.s < c)) throw std::invalid_argument("scenario: certified s must be < c");
    const std::vector<Vec> positions = sample_box_positions(seed, n, dim, box_radius);
    Rng rng(seed ^ 0xa02bdbf7bb3c0a7ULL);  // slope stream, decoupled from positions

    const double S0 = positions_diameter(positions) / (c - psi.s);
    InitialDatum datum;
    datum.seed = seed;
    datum.S0 = S0;
    if (S0 <= 0.0) {
        for (const auto& p : positions) datum.trajectories.emplace_back(0.0, p, psi.s);
        return datum;
    }

    // piecewise linear, built backward from t = 0 on a pitch-S0/8 grid;
    // slope magnitudes capped at 0.9*s so numeric checks sit strictly
    // inside the bound
    const int segments = 8;
    const double pitch = S0 / static_cast<double>(segments);
    for (const auto& p : positions) {
        std::vector<double> times(segments + 1);
        std::vector<Vec> points(segments + 1);
        times[segments] = 0.0;
        points[segments] = p;
        for (int k = segments - 1; k >= 0; --k) {
            times[static_cast<std::size_t>(k)] = -S0 + static_cast<double>(k) * pitch;
            const double speed = rng.uniform(0.0, 0.9 * psi.s);
            Vec dir = rng.unit_vector(dim);
            Vec prev = points[static_cast<std::size_t>(k) + 1];
            add_scaled(prev, -speed * pitch, dir);
            points[static_cast<std::size_t>(k)] = std::move(prev);
        }
        times[0] = -S0;  // exact left endpoint
        datum.trajectories.emplace_back(std::move(times), std::move(points), psi.s);
    }
    return datum;
}

SystemState make_state(const InitialDatum& datum, double c, const InfluenceCertificate& psi) {
    return SystemState::create(datum.trajectories, c, psi);
}

SymmetricPairResult symmetric_pair_scalar(const Trajectory& x0_path, double T, double dt, double c,
                                          const InfluenceCertificate& psi, Scheme scheme) {
    if (x0_path.dim() != 1)
        throw std::invalid_argument("symmetric_pair_scalar: scalar datum required");
    if (x0_path.frontier_time() != 0.0)
        throw std::invalid_argument("symmetric_pair_scalar: datum frontier must sit at t = 0");
    if (!(dt > 0.0) || !(T >= dt))
        throw std::invalid_argument("symmetric_pair_scalar: need 0 < dt <= T");
    if (scheme == Scheme::picard)
        throw std::invalid_argument("symmetric_pair_scalar: euler or heun only");

    SymmetricPairResult result;
    SimTrace& trace = result.trace;
    trace.scheme = scheme;
    trace.dt = dt;
    trace.n_agents = 2;
    trace.dim = 1;

    Trajectory x = x0_path;          // agent 1
    Trajectory mirror = x0_path;     // agent 2 = -x, kept explicitly for the delay solve
    {
        std::vector<double> times(x0_path.size());
        std::vector<Vec> pts(x0_path.size());
        for (std::size_t k = 0; k < x0_path.size(); ++k) {
            times[k] = x0_path.sample_time(k);
            pts[k] = Vec{-x0_path.sample_value(k)[0]};
        }
        mirror = Trajectory(std::move(times), std::move(pts), x0_path.lipschitz_bound());
    }

    DelaySolveOptions delay_opts;
    const double s = x0_path.lipschitz_bound();

    // xdot = -psi(|x + x~|)(x + x~), the delay solved against the mirrored path
    auto slope_at = [&](double t, const FrontierExtension* ext_mirror) {
        const Vec z = ext_mirror != nullptr && t > x.frontier_time()
                          ? x.extrapolate_at(t, Vec{-ext_mirror->slope[0]})
                          : x.eval_at(t);
        const DelayResult d = solve_delay(z, mirror, t, c, delay_opts, ext_mirror);
        const double sum = z[0] - d.x_delayed[0];  // x + x~ via the mirror
        return std::pair<double, DelayResult>{-psi.psi(std::abs(sum)) * sum, d};
    };

    const double t_end = T;
    const double tiny = 1e-12 * std::max(1.0, t_end);

    double r0 = 0.0;  // max |x| over the initial window; |x| never grows past it
    for (std::size_t k = 0; k < x0_path.size(); ++k)
        r0 = std::max(r0, std::abs(x0_path.sample_value(k)[0]));
    const double tau_safe = 2.0 * r0 / (c - s) + dt;

    auto record = [&](double t, double xv, const DelayResult& d) {
        trace.times.push_back(t);
        trace.positions.push_back({Vec{xv}, Vec{-xv}});
        trace.tau_min.push_back(d.tau);
        trace.tau_max.push_back(d.tau);
        trace.diameter.push_back(2.0 * std::abs(xv));
        trace.radius.push_back(std::abs(xv));
        SymmetricPairStep step;
        step.t = t;
        step.x = xv;
        step.x_retarded = -d.x_delayed[0];  // x(t - tau) of agent 1
        step.tau = d.tau;
        result.steps.push_back(step);
    };

    try {
        {
            const auto [v0, d0] = slope_at(0.0, nullptr);
            (void)v0;
            record(0.0, x.frontier_value()[0], d0);
        }
        double t = 0.0;
        while (t < t_end - tiny) {
            const double h = std::min(dt, t_end - t);
            const auto [k1, d_start] = slope_at(t, nullptr);
            double x_new;
            if (scheme == Scheme::euler) {
                x_new = x.frontier_value()[0] + h * k1;
            } else {
                FrontierExtension ext{t + h, Vec{-k1}};  // mirror moves with slope -k1
                const auto [k2, d_stage] = slope_at(t + h, &ext);
                (void)d_stage;
                x_new = x.frontier_value()[0] + 0.5 * h * (k1 + k2);
            }
            t += h;
            x.append_segment(t, Vec{x_new});
            mirror.append_segment(t, Vec{-x_new});

            const auto [v_here, d_here] = slope_at(t, nullptr);
            (void)v_here;
            record(t, x_new, d_here);

            const double cut = t - tau_safe;
            if (cut > x.window_start()) {
                x.prune_before(cut);
                mirror.prune_before(cut);
            }
        }
    } catch (const std::exception& e) {
        result.ok = false;
        result.error = e.what();
    }
    return result;
}

}  // namespace hkc
