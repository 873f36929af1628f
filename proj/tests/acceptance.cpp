// Acceptance gate: prints one PASS/FAIL line per criterion and exits with
// the number of failures.  Tolerances are part of the project contract.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "cascade/analytic.hpp"
#include "cascade/detection.hpp"
#include "cascade/dynamics.hpp"
#include "cascade/entanglement.hpp"
#include "cascade/errors.hpp"
#include "cascade/params.hpp"

using namespace cascade;
using cd = std::complex<double>;

namespace {

int failures = 0;

void criterion(int n, const std::string& label, bool ok,
               const std::string& detail = "") {
    std::printf("%s criterion %2d: %s%s%s\n", ok ? "PASS" : "FAIL", n,
                label.c_str(), detail.empty() ? "" : " -- ",
                detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

SystemParams baseline() {
    SubsystemParams sub{10.0, 10.0, 1000.0, 0.9, 0.1, 0.0, 0.0};
    return validate(SystemParams{sub, sub, 0.0, {}, {}});
}

/// Move monitored/unmonitored weight at fixed total cavity bandwidth.
SystemParams with_kappa_ratio(SystemParams p, double ratio) {
    for (SubsystemParams* s : {&p.a, &p.b}) {
        const double bandwidth = s->kappa + s->kappa_loss;
        s->kappa = ratio * bandwidth;
        s->kappa_loss = (1.0 - ratio) * bandwidth;
    }
    return validate(p);
}

double max_component_gap(const AmplitudeState& x, const AmplitudeState& y) {
    return std::max({std::abs(x.alpha - y.alpha), std::abs(x.beta - y.beta),
                     std::abs(x.gamma - y.gamma),
                     std::abs(x.delta - y.delta)});
}

double uniform01(std::mt19937_64& rng) {
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

std::string num(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

}  // namespace

int main() {
    const SystemParams base = baseline();
    const double tbar = find_tbar(base, 0.0, 100.0);
    const Schedule sched{tbar};
    const AmplitudeState at_tbar = amplitudes_driven(base, tbar);
    const double c_peak = concurrence_atoms(at_tbar);

    // 1: location and height of the atomic concurrence peak
    criterion(1, "switch-off time and peak concurrence",
              std::abs(tbar - 28.32) <= 0.05 &&
                  std::abs(c_peak - 0.66) <= 0.01,
              "tbar=" + num(tbar) + " c=" + num(c_peak));

    // 2: the peak against the monitored share of the cavity bandwidth
    {
        SystemParams all = with_kappa_ratio(base, 1.0);
        SystemParams most = with_kappa_ratio(base, 0.8);
        const double c_all = concurrence_atoms(
            amplitudes_driven(all, find_tbar(all, 0.0, 100.0)));
        const double c_most = concurrence_atoms(
            amplitudes_driven(most, find_tbar(most, 0.0, 100.0)));
        criterion(2, "peak concurrence at monitored shares 1.0 and 0.8",
                  std::abs(c_all - 0.73) <= 0.01 &&
                      std::abs(c_most - 0.59) <= 0.01,
                  "c(1.0)=" + num(c_all) + " c(0.8)=" + num(c_most));
    }

    // 3: photonic populations are small at the switch-off time
    {
        const double beta_sq = std::norm(at_tbar.beta);
        const double delta_sq = std::norm(at_tbar.delta);
        criterion(3, "cavity populations at switch-off",
                  std::abs(beta_sq - 0.01) <= 0.005 &&
                      std::abs(delta_sq - 0.01) <= 0.005,
                  "beta_sq=" + num(beta_sq) + " delta_sq=" + num(delta_sq));
    }

    // 4: after switch-off the atoms freeze and the cavities empty
    {
        double worst = 0.0;
        for (int k = 1; k <= 400; ++k) {
            const double t = tbar + (100.0 - tbar) * k / 400.0;
            worst = std::max(worst,
                             std::abs(concurrence_atoms(
                                          evolve_protocol(base, sched, t)) -
                                      c_peak));
        }
        const double c_cav =
            concurrence_cavities(evolve_protocol(base, sched, 100.0));
        criterion(4, "stored concurrence constant, photonic drained",
                  worst <= 1e-10 && c_cav < 1e-6,
                  "drift=" + num(worst) + " c_cav=" + num(c_cav));
    }

    // 5: long-time channel probabilities and the conditional figures
    const ChannelProbabilities cp =
        channel_probabilities(base, sched, 100.0, 0.88);
    {
        const AmplitudeState at_end = evolve_protocol(base, sched, 100.0);
        const double c_cond = concurrence_conditional(at_end, cp);
        const double enhancement = (c_cond / c_peak - 1.0) * 100.0;
        criterion(5, "channel probabilities and conditional concurrence",
                  std::abs(cp.p_no - 0.66) <= 0.01 &&
                      std::abs(cp.p_abs - 0.20) <= 0.01 &&
                      std::abs(cp.p0 - 0.88) <= 0.01 &&
                      std::abs(c_cond - 0.75) <= 0.01 &&
                      std::abs(enhancement - 14.0) <= 2.0,
                  "p_no=" + num(cp.p_no) + " p_abs=" + num(cp.p_abs) +
                      " p0=" + num(cp.p0) + " c_cond=" + num(c_cond) +
                      " gain=" + num(enhancement) + "%");
    }

    // 6: perfect monitoring and detection leave a near-Bell pair
    {
        SystemParams ideal = with_kappa_ratio(base, 1.0);
        const double tb = find_tbar(ideal, 0.0, 100.0);
        const Schedule s{tb};
        const ChannelProbabilities icp =
            channel_probabilities(ideal, s, 100.0, 1.0);
        const double c_cond =
            concurrence_conditional(evolve_protocol(ideal, s, 100.0), icp);
        criterion(6, "ideal detector and lossless mirrors give c_cond ~ 1",
                  std::abs(c_cond - 1.0) <= 0.02, "c_cond=" + num(c_cond));
    }

    // 7: closed forms against direct integration on random parameters,
    //    including a coalescing-exponent stress test
    {
        std::mt19937_64 rng(20260815ull);
        double worst = 0.0;
        for (int trial = 0; trial < 200; ++trial) {
            SystemParams p;
            for (SubsystemParams* s : {&p.a, &p.b}) {
                s->g = 1.0 + 19.0 * uniform01(rng);
                s->omega = 1.0 + 19.0 * uniform01(rng);
                s->delta = 500.0 + 1500.0 * uniform01(rng);
                s->kappa = 0.1 + 1.4 * uniform01(rng);
                s->kappa_loss = 0.3 * uniform01(rng);
            }
            p.phi = 2.0 * 3.141592653589793 * uniform01(rng);
            p = validate(p);
            const Schedule s{30.0};
            const auto states = integrate(p, s, Grid{50.0, 5e-4});
            for (std::size_t i = 0; i < states.size(); i += 4000) {
                const double gap = max_component_gap(
                    states[i], evolve_protocol(p, s, states[i].t));
                worst = std::max(worst, gap);
            }
            worst = std::max(worst,
                             max_component_gap(
                                 states.back(),
                                 evolve_protocol(p, s, states.back().t)));
        }

        // exponents fabricated to coalesce exactly, then nudged apart
        SubsystemParams raw{1.0, 1.0, 10.0, 0.8, 0.2, 0.0, 0.0};
        SystemParams degen = validate(SystemParams{raw, raw, 0.0, {}, {}});
        for (DerivedParams* d : {&degen.derived_a, &degen.derived_b}) {
            d->g_bar = -0.25;
            d->stark_laser = -0.2;
            d->stark_cavity = -0.2;
            d->bandwidth = 1.0;
        }
        SystemParams nudged = degen;
        nudged.derived_a.g_bar += 1e-8;
        nudged.derived_b.g_bar -= 1e-8;
        double worst_degen = 0.0;
        for (double t : {1.0, 5.0, 20.0}) {
            worst_degen = std::max(
                worst_degen, max_component_gap(amplitudes_driven(degen, t),
                                               amplitudes_driven(nudged, t)));
        }
        criterion(7, "closed forms vs integration, random and degenerate",
                  worst <= 1e-8 && worst_degen <= 1e-5,
                  "worst=" + num(worst) +
                      " degenerate_gap=" + num(worst_degen));
    }

    // 8: a large trajectory ensemble reproduces the analytic shares
    {
        const std::size_t n = 100000;
        const auto records = simulate_detection_records(base, sched, 0.88, n,
                                                        1ull, {100.0, 1e-10});
        std::size_t survived = 0, rad = 0, mir_a = 0, mir_b = 0, clicks = 0;
        for (const auto& rec : records) {
            if (!rec.trajectory.jump_time)
                ++survived;
            else if (*rec.trajectory.channel == JumpChannel::radiated)
                ++rad;
            else if (*rec.trajectory.channel == JumpChannel::mirror_a)
                ++mir_a;
            else
                ++mir_b;
            if (rec.clicked) ++clicks;
        }
        const double nn = static_cast<double>(n);
        struct Share {
            const char* name;
            double got;
            double want;
        } shares[] = {
            {"survive", survived / nn, cp.p_no},
            {"radiated", rad / nn, cp.p_rad},
            {"mirror_a", mir_a / nn, 0.06648140401017956},
            {"mirror_b", mir_b / nn, 0.13462482731885492},
        };
        bool ok = true;
        std::string detail;
        for (const Share& s : shares) {
            // 99% two-sided binomial envelope
            const double envelope =
                2.5758 * std::sqrt(s.want * (1.0 - s.want) / nn);
            if (std::abs(s.got - s.want) > envelope) ok = false;
            detail += std::string(s.name) + "=" + num(s.got) + " ";
        }
        const double p0_hat = 1.0 - clicks / nn;
        const double sigma = std::sqrt(cp.p0 * (1.0 - cp.p0) / nn);
        if (std::abs(p0_hat - cp.p0) > 3.0 * sigma) ok = false;
        detail += "p0=" + num(p0_hat);
        criterion(8, "100k-trajectory ensemble within binomial envelopes", ok,
                  detail);
    }

    // 9: the general concurrence against exact special cases
    {
        std::mt19937_64 rng(424242ull);
        double worst = 0.0;
        for (int trial = 0; trial < 1000; ++trial) {
            AmplitudeState s;
            auto unit = [&] { return 2.0 * uniform01(rng) - 1.0; };
            s.alpha = cd{unit(), unit()};
            s.beta = cd{unit(), unit()};
            s.gamma = cd{unit(), unit()};
            s.delta = cd{unit(), unit()};
            const double norm =
                std::sqrt(std::norm(s.alpha) + std::norm(s.beta) +
                          std::norm(s.gamma) + std::norm(s.delta));
            const double scale = 0.99 / std::max(1.0, norm);
            s.alpha *= scale;
            s.beta *= scale;
            s.gamma *= scale;
            s.delta *= scale;
            worst = std::max(worst, std::abs(concurrence(rho_atoms(s)) -
                                             concurrence_atoms(s)));
            worst = std::max(worst, std::abs(concurrence(rho_cavities(s)) -
                                             concurrence_cavities(s)));
        }
        DensityMatrix bell = DensityMatrix::Zero();
        bell(0, 0) = bell(0, 3) = bell(3, 0) = bell(3, 3) = 0.5;
        DensityMatrix product = DensityMatrix::Zero();
        product(1, 1) = 1.0;
        criterion(9, "concurrence matches closed forms and exact limits",
                  worst <= 1e-10 && concurrence(bell) == 1.0 &&
                      concurrence(product) == 0.0,
                  "worst=" + num(worst));
    }

    // 10: conservation, rate balance and propagation-phase invariance
    {
        bool ok = true;
        std::string detail;
        double worst_part = 0.0;
        for (double t : {5.0, 28.32, 50.0, 100.0}) {
            const ChannelProbabilities c =
                channel_probabilities(base, sched, t, 0.88);
            worst_part = std::max(worst_part,
                                  std::abs(c.p_no + c.p_rad + c.p_abs - 1.0));
        }
        if (worst_part > 1e-6) ok = false;
        detail += "partition=" + num(worst_part);

        const double bandwidth = base.derived_a.bandwidth;
        double worst_rate = 0.0;
        const double h = 1e-5;
        for (double t : {3.0, 15.0, 28.32 + 2.0, 60.0}) {
            const double slope = (p_no(evolve_protocol(base, sched, t - h)) -
                                  p_no(evolve_protocol(base, sched, t + h))) /
                                 (2.0 * h);
            const double total =
                jump_rates(base, evolve_protocol(base, sched, t)).total();
            worst_rate = std::max(worst_rate, std::abs(slope - total));
        }
        if (worst_rate > 1e-6 * bandwidth) ok = false;
        detail += " rate_balance=" + num(worst_rate);

        double worst_phi = 0.0;
        const double pi = 3.141592653589793;
        for (double phi : {pi / 3.0, pi, 1.7 * pi}) {
            SystemParams rotated = base;
            rotated.phi = phi;
            rotated = validate(rotated);
            for (double t : {5.0, 28.32, 40.0}) {
                const AmplitudeState s0 = evolve_protocol(base, sched, t);
                const AmplitudeState s1 = evolve_protocol(rotated, sched, t);
                worst_phi = std::max(
                    worst_phi,
                    std::max({std::abs(std::abs(s1.alpha) - std::abs(s0.alpha)),
                              std::abs(std::abs(s1.beta) - std::abs(s0.beta)),
                              std::abs(std::abs(s1.gamma) - std::abs(s0.gamma)),
                              std::abs(std::abs(s1.delta) -
                                       std::abs(s0.delta))}));
                worst_phi = std::max(
                    worst_phi, std::abs(jump_rates(rotated, s1).radiated -
                                        jump_rates(base, s0).radiated));
            }
        }
        if (worst_phi > 1e-10) ok = false;
        detail += " phase_invariance=" + num(worst_phi);
        criterion(10, "conservation, rate balance, phase invariance", ok,
                  detail);
    }

    if (failures == 0)
        std::printf("all criteria passed\n");
    else
        std::printf("%d criteria failed\n", failures);
    return failures;
}
