#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "cascade/analytic.hpp"
#include "cascade/params.hpp"
#include "cascade/rng.hpp"

namespace cascade {

/// Non-Hermitian generator of the no-jump evolution acting on the amplitude
/// vector (alpha, beta, gamma, delta).  With the lasers off the rows for
/// alpha and gamma vanish and only the photonic decay remains.
Eigen::Matrix4cd generator(const SystemParams& p, bool laser_on);

struct Grid {
    double t_max = 100.0;
    double dt = 1e-3;
};

/// Fixed-step RK4 integration of the no-jump evolution.  Returns the state
/// at every grid point 0, dt, 2*dt, ..., with schedule.tbar and t_max
/// inserted exactly (steps are split there, never straddled).
/// Throws NegativeTime for t_max < 0 and StepTooLarge when
/// dt * ||generator||_inf > 0.1.
std::vector<AmplitudeState> integrate(const SystemParams& p, const Schedule& s,
                                      const Grid& g);

/// Instantaneous jump rates out of the no-jump state: the monitored cascade
/// output (with its two-path interference), and the unmonitored mirror
/// losses of each cavity.
struct JumpRates {
    double radiated = 0.0;  // |sqrt(kappa_a) beta + sqrt(kappa_b) e^{-i phi} delta|^2
    double mirror_a = 0.0;  // kappa_loss_a |beta|^2
    double mirror_b = 0.0;  // kappa_loss_b |delta|^2
    double total() const { return radiated + mirror_a + mirror_b; }
};

JumpRates jump_rates(const SystemParams& p, const AmplitudeState& s);

/// Total rate of residual spontaneous scattering from the eliminated upper
/// levels, (gamma_eff + gamma_eff')*|omega*atom + g*photon|^2 summed over
/// subsystems.  Diagnostic only; the five-state evolution ignores it.
/// Respects s.laser_on (omega terms vanish with the lasers off).
double spont_emission_bound(const SystemParams& p, const AmplitudeState& s);

enum class JumpChannel { radiated, mirror_a, mirror_b };

struct TrajectoryRecord {
    std::uint64_t seed = 0;
    std::optional<double> jump_time;
    std::optional<JumpChannel> channel;  // set iff jump_time is set
};

struct TrajectoryOptions {
    double t_max = 100.0;
    double refine_rel_tol = 1e-10;  // relative width of the jump-time bracket
};

/// One quantum trajectory by the delay-function method: draw r uniform in
/// (0,1), find the time where the survival probability p_no(t) crosses r
/// (p_no is non-increasing, so the crossing is located by bisection), then
/// pick the jump channel with probability rate_i / total rate.  No crossing
/// before t_max means no jump.  Identical seeds give identical records.
TrajectoryRecord simulate_trajectory(const SystemParams& p, const Schedule& s,
                                     const TrajectoryOptions& o,
                                     std::uint64_t seed);

/// Same, drawing from a caller-owned generator (used when the caller needs
/// further draws from the trajectory's stream, e.g. detector clicks).
TrajectoryRecord simulate_trajectory(const SystemParams& p, const Schedule& s,
                                     const TrajectoryOptions& o, Rng& rng);

/// Empirical ensemble at time t over n trajectories seeded from
/// trajectory_seed(master_seed, i): the surviving fraction backs the pure
/// conditioned state |psi_no(t)>/sqrt(p_no), the jumped fraction sits in the
/// shared ground state.  Per-channel jump counts included.
struct EnsembleResult {
    std::size_t n = 0;
    std::size_t survived = 0;
    std::size_t radiated = 0;
    std::size_t mirror_a = 0;
    std::size_t mirror_b = 0;
    double p_no_empirical = 0.0;
    double p_yes_empirical = 0.0;
    AmplitudeState conditioned;  // analytic no-jump state at t (unnormalized)
};

EnsembleResult ensemble_density(const SystemParams& p, const Schedule& s,
                                std::size_t n, std::uint64_t master_seed,
                                double t);

}  // namespace cascade
