#include "cascade/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cascade/errors.hpp"
#include "cascade/rng.hpp"

namespace cascade {

namespace {

using cd = std::complex<double>;
constexpr cd I{0.0, 1.0};

double inf_norm(const Eigen::Matrix4cd& m) {
    double best = 0.0;
    for (int i = 0; i < 4; ++i)
        best = std::max(best, m.row(i).cwiseAbs().sum());
    return best;
}

}  // namespace

Eigen::Matrix4cd generator(const SystemParams& p, bool laser_on) {
    const DerivedParams& da = p.derived_a;
    const DerivedParams& db = p.derived_b;
    const double gbar_a = laser_on ? da.g_bar : 0.0;
    const double gbar_b = laser_on ? db.g_bar : 0.0;
    const double stark_a = laser_on ? da.stark_laser : 0.0;
    const double stark_b = laser_on ? db.stark_laser : 0.0;
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    m(0, 0) = -I * stark_a;
    m(0, 1) = -I * gbar_a;
    m(1, 0) = -I * gbar_a;
    m(1, 1) = -cd{0.5 * da.bandwidth, da.stark_cavity};
    m(2, 2) = -I * stark_b;
    m(2, 3) = -I * gbar_b;
    m(3, 1) = -std::sqrt(p.a.kappa * p.b.kappa) * std::exp(I * p.phi);
    m(3, 2) = -I * gbar_b;
    m(3, 3) = -cd{0.5 * db.bandwidth, db.stark_cavity};
    return m;
}

std::vector<AmplitudeState> integrate(const SystemParams& p, const Schedule& s,
                                      const Grid& g) {
    if (!(g.t_max >= 0.0))
        throw NegativeTime("integration horizon must be >= 0, got " +
                           std::to_string(g.t_max));
    if (!(g.dt > 0.0))
        throw StepTooLarge("dt must be > 0, got " + std::to_string(g.dt));
    const Eigen::Matrix4cd m_on = generator(p, true);
    const Eigen::Matrix4cd m_off = generator(p, false);
    const double norm = std::max(inf_norm(m_on), inf_norm(m_off));
    if (g.dt * norm > 0.1)
        throw StepTooLarge("dt * ||generator|| = " +
                           std::to_string(g.dt * norm) +
                           " exceeds 0.1; reduce dt");

    // grid points: multiples of dt, with tbar and t_max inserted exactly
    const double tiny = 1e-12 * std::max(1.0, g.t_max);
    std::vector<double> ts;
    ts.push_back(0.0);
    for (std::size_t k = 1;; ++k) {
        const double t = static_cast<double>(k) * g.dt;
        if (t >= g.t_max - tiny) break;
        ts.push_back(t);
    }
    if (g.t_max > 0.0) ts.push_back(g.t_max);
    if (s.tbar && *s.tbar > 0.0 && *s.tbar < g.t_max) {
        const auto it = std::lower_bound(ts.begin(), ts.end(), *s.tbar);
        if (it != ts.end() && std::abs(*it - *s.tbar) < tiny)
            *it = *s.tbar;
        else if (it != ts.begin() && std::abs(*(it - 1) - *s.tbar) < tiny)
            *(it - 1) = *s.tbar;
        else
            ts.insert(it, *s.tbar);
    }

    auto laser_on_at = [&](double t) { return !(s.tbar && t >= *s.tbar); };

    std::vector<AmplitudeState> out;
    out.reserve(ts.size());
    Eigen::Vector4cd y;
    y << cd{1.0, 0.0}, cd{0.0, 0.0}, cd{0.0, 0.0}, cd{0.0, 0.0};
    auto record = [&](double t) {
        AmplitudeState st;
        st.t = t;
        st.alpha = y(0);
        st.beta = y(1);
        st.gamma = y(2);
        st.delta = y(3);
        st.laser_on = laser_on_at(t);
        out.push_back(st);
    };
    record(0.0);
    for (std::size_t i = 1; i < ts.size(); ++i) {
        const double h = ts[i] - ts[i - 1];
        const Eigen::Matrix4cd& m = laser_on_at(ts[i - 1]) ? m_on : m_off;
        const Eigen::Vector4cd k1 = m * y;
        const Eigen::Vector4cd k2 = m * (y + 0.5 * h * k1);
        const Eigen::Vector4cd k3 = m * (y + 0.5 * h * k2);
        const Eigen::Vector4cd k4 = m * (y + h * k3);
        y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        record(ts[i]);
    }
    return out;
}

JumpRates jump_rates(const SystemParams& p, const AmplitudeState& s) {
    JumpRates r;
    const cd mix = std::sqrt(p.a.kappa) * s.beta +
                   std::sqrt(p.b.kappa) * std::exp(-I * p.phi) * s.delta;
    r.radiated = std::norm(mix);
    r.mirror_a = p.a.kappa_loss * std::norm(s.beta);
    r.mirror_b = p.b.kappa_loss * std::norm(s.delta);
    return r;
}

double spont_emission_bound(const SystemParams& p, const AmplitudeState& s) {
    const double omega_a = s.laser_on ? p.a.omega : 0.0;
    const double omega_b = s.laser_on ? p.b.omega : 0.0;
    const double weight_a = p.derived_a.gamma_eff + p.derived_a.gamma_eff_prime;
    const double weight_b = p.derived_b.gamma_eff + p.derived_b.gamma_eff_prime;
    return weight_a * std::norm(omega_a * s.alpha + p.a.g * s.beta) +
           weight_b * std::norm(omega_b * s.gamma + p.b.g * s.delta);
}

TrajectoryRecord simulate_trajectory(const SystemParams& p, const Schedule& s,
                                     const TrajectoryOptions& o, Rng& rng) {
    if (!(o.t_max >= 0.0))
        throw NegativeTime("trajectory horizon must be >= 0, got " +
                           std::to_string(o.t_max));
    TrajectoryRecord rec;

    // evaluate the protocol without recomputing the switch-off state
    std::optional<AmplitudeState> at_tbar;
    if (s.tbar && *s.tbar <= o.t_max)
        at_tbar = amplitudes_driven(p, *s.tbar);
    auto state_at = [&](double t) {
        if (at_tbar && t >= at_tbar->t)
            return amplitudes_stored(p, *at_tbar, t);
        return amplitudes_driven(p, t);
    };

    const double r = rng.uniform01();
    if (p_no(state_at(o.t_max)) > r) return rec;  // no jump in the window

    // p_no is non-increasing, so the crossing p_no(t) = r is found by
    // bisection over the whole window
    double lo = 0.0, hi = o.t_max;
    while (hi - lo > o.refine_rel_tol * std::max(1.0, hi)) {
        const double mid = 0.5 * (lo + hi);
        if (p_no(state_at(mid)) > r)
            lo = mid;
        else
            hi = mid;
    }
    const double t_jump = 0.5 * (lo + hi);
    rec.jump_time = t_jump;

    const JumpRates rates = jump_rates(p, state_at(t_jump));
    const double total = rates.total();
    const double u = rng.uniform01() * total;
    if (total <= 0.0 || u <= rates.radiated)
        rec.channel = JumpChannel::radiated;
    else if (u <= rates.radiated + rates.mirror_a)
        rec.channel = JumpChannel::mirror_a;
    else
        rec.channel = JumpChannel::mirror_b;
    return rec;
}

TrajectoryRecord simulate_trajectory(const SystemParams& p, const Schedule& s,
                                     const TrajectoryOptions& o,
                                     std::uint64_t seed) {
    Rng rng(seed);
    TrajectoryRecord rec = simulate_trajectory(p, s, o, rng);
    rec.seed = seed;
    return rec;
}

EnsembleResult ensemble_density(const SystemParams& p, const Schedule& s,
                                std::size_t n, std::uint64_t master_seed,
                                double t) {
    EnsembleResult res;
    res.n = n;
    TrajectoryOptions o;
    o.t_max = t;
    for (std::size_t i = 0; i < n; ++i) {
        const TrajectoryRecord rec =
            simulate_trajectory(p, s, o, trajectory_seed(master_seed, i));
        if (!rec.jump_time) {
            ++res.survived;
            continue;
        }
        switch (*rec.channel) {
            case JumpChannel::radiated: ++res.radiated; break;
            case JumpChannel::mirror_a: ++res.mirror_a; break;
            case JumpChannel::mirror_b: ++res.mirror_b; break;
        }
    }
    if (n > 0) {
        res.p_no_empirical = static_cast<double>(res.survived) / n;
        res.p_yes_empirical = 1.0 - res.p_no_empirical;
    }
    res.conditioned = evolve_protocol(p, s, t);
    return res;
}

}  // namespace cascade
