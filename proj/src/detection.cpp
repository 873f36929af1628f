#include "cascade/detection.hpp"

#include <cmath>
#include <string>

#include "cascade/errors.hpp"
#include "cascade/rng.hpp"

namespace cascade {

namespace {

struct RateIntegrals {
    double rad = 0.0;
    double abs = 0.0;
};

/// Composite Simpson rule for both channel rates over [a, b], which must not
/// contain the switch-off kink in its interior.
RateIntegrals simpson_between(const SystemParams& p, const Schedule& s,
                              double a, double b, double quad_step) {
    RateIntegrals acc;
    if (b <= a) return acc;
    auto n = static_cast<std::size_t>(std::ceil((b - a) / quad_step));
    n += n % 2;
    n = std::max<std::size_t>(n, 2);
    const double h = (b - a) / static_cast<double>(n);
    auto rates_at = [&](double t) {
        return jump_rates(p, evolve_protocol(p, s, t));
    };
    for (std::size_t i = 0; i <= n; ++i) {
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        const JumpRates r = rates_at(a + static_cast<double>(i) * h);
        acc.rad += w * r.radiated;
        acc.abs += w * (r.mirror_a + r.mirror_b);
    }
    acc.rad *= h / 3.0;
    acc.abs *= h / 3.0;
    return acc;
}

RateIntegrals accumulate(const SystemParams& p, const Schedule& s, double a,
                         double b, double quad_step) {
    // split at the switch-off time so no Simpson panel straddles the kink
    if (s.tbar && *s.tbar > a && *s.tbar < b) {
        RateIntegrals first = simpson_between(p, s, a, *s.tbar, quad_step);
        const RateIntegrals second =
            simpson_between(p, s, *s.tbar, b, quad_step);
        first.rad += second.rad;
        first.abs += second.abs;
        return first;
    }
    return simpson_between(p, s, a, b, quad_step);
}

ChannelProbabilities pack(const SystemParams& p, const Schedule& s, double t,
                          double eta, const RateIntegrals& acc) {
    ChannelProbabilities cp;
    cp.t = t;
    cp.p_no = p_no(evolve_protocol(p, s, t));
    cp.p_rad = acc.rad;
    cp.p_abs = acc.abs;
    cp.eta = eta;
    cp.p0 = 1.0 - eta * acc.rad;
    return cp;
}

}  // namespace

ChannelProbabilities channel_probabilities(const SystemParams& p,
                                           const Schedule& s, double t,
                                           double eta, double quad_step) {
    if (!(t >= 0.0))
        throw NegativeTime("channel probabilities need t >= 0, got " +
                           std::to_string(t));
    if (!(quad_step > 0.0))
        throw StepTooLarge("quadrature step must be > 0, got " +
                           std::to_string(quad_step));
    return pack(p, s, t, eta, accumulate(p, s, 0.0, t, quad_step));
}

std::vector<ChannelProbabilities> channel_probability_series(
    const SystemParams& p, const Schedule& s, const std::vector<double>& times,
    double eta, double quad_step) {
    if (!(quad_step > 0.0))
        throw StepTooLarge("quadrature step must be > 0, got " +
                           std::to_string(quad_step));
    std::vector<ChannelProbabilities> out;
    out.reserve(times.size());
    RateIntegrals acc;
    double prev = 0.0;
    for (const double t : times) {
        if (!(t >= prev) || !(t >= 0.0))
            throw NegativeTime("series times must be non-decreasing and >= 0");
        const RateIntegrals step = accumulate(p, s, prev, t, quad_step);
        acc.rad += step.rad;
        acc.abs += step.abs;
        out.push_back(pack(p, s, t, eta, acc));
        prev = t;
    }
    return out;
}

DensityMatrix rho_atoms_given_no_loss(const AmplitudeState& s) {
    const double survival = std::norm(s.alpha) + std::norm(s.beta) +
                            std::norm(s.gamma) + std::norm(s.delta);
    if (survival <= 0.0)
        throw ZeroSurvivalProbability(
            "cannot condition on survival: p_no vanishes");
    DensityMatrix rho = DensityMatrix::Zero();
    rho(2, 2) = std::norm(s.alpha) / survival;
    rho(1, 1) = std::norm(s.gamma) / survival;
    rho(2, 1) = s.alpha * std::conj(s.gamma) / survival;
    rho(1, 2) = std::conj(s.alpha) * s.gamma / survival;
    rho(0, 0) = (std::norm(s.beta) + std::norm(s.delta)) / survival;
    return rho;
}

ConditionalState conditional_state(const AmplitudeState& s,
                                   const ChannelProbabilities& probs) {
    if (probs.p0 <= 0.0)
        throw ZeroNullClickProbability(
            "cannot condition on no click: p0 vanishes");
    ConditionalState c;
    c.weight_no = probs.p_no / probs.p0;
    c.weight_vacuum =
        ((1.0 - probs.eta) * probs.p_rad + probs.p_abs) / probs.p0;
    DensityMatrix vacuum = DensityMatrix::Zero();
    vacuum(0, 0) = 1.0;
    // the weights close to 1 only within quadrature accuracy; normalize the
    // mixture so downstream consumers see an exact unit trace
    const double total = c.weight_no + c.weight_vacuum;
    c.rho = (c.weight_no * rho_atoms_given_no_loss(s) +
             c.weight_vacuum * vacuum) /
            total;
    return c;
}

double concurrence_conditional(const AmplitudeState& s,
                               const ChannelProbabilities& probs) {
    if (probs.p0 <= 0.0)
        throw ZeroNullClickProbability(
            "cannot condition on no click: p0 vanishes");
    return std::clamp(2.0 * std::abs(s.alpha) * std::abs(s.gamma) / probs.p0,
                      0.0, 1.0);
}

std::vector<DetectionRecord> simulate_detection_records(
    const SystemParams& p, const Schedule& s, double eta, std::size_t n,
    std::uint64_t master_seed, const TrajectoryOptions& o) {
    std::vector<DetectionRecord> records;
    records.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Rng rng(trajectory_seed(master_seed, i));
        DetectionRecord rec;
        rec.trajectory = simulate_trajectory(p, s, o, rng);
        rec.trajectory.seed = trajectory_seed(master_seed, i);
        // beam splitter of transmittivity sqrt(eta) in front of the
        // detector: a radiated photon clicks with probability eta
        if (rec.trajectory.channel &&
            *rec.trajectory.channel == JumpChannel::radiated)
            rec.clicked = rng.uniform01() < eta;
        records.push_back(rec);
    }
    return records;
}

RecordStatistics tally_records(const std::vector<DetectionRecord>& records) {
    RecordStatistics st;
    st.n = records.size();
    for (const DetectionRecord& rec : records) {
        if (!rec.trajectory.jump_time)
            ++st.no_jump;
        else if (*rec.trajectory.channel != JumpChannel::radiated)
            ++st.mirror_loss;
        else if (rec.clicked)
            ++st.click;
        else
            ++st.reflected_loss;
    }
    st.p0_empirical =
        st.n > 0
            ? 1.0 - static_cast<double>(st.click) / static_cast<double>(st.n)
            : 1.0;
    return st;
}

RecordStatistics simulate_records(const SystemParams& p, const Schedule& s,
                                  double eta, std::size_t n,
                                  std::uint64_t master_seed,
                                  const TrajectoryOptions& o) {
    return tally_records(simulate_detection_records(p, s, eta, n, master_seed, o));
}

}  // namespace cascade
