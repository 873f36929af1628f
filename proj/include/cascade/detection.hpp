#pragma once

#include <cstdint>
#include <vector>

#include "cascade/analytic.hpp"
#include "cascade/dynamics.hpp"
#include "cascade/entanglement.hpp"
#include "cascade/params.hpp"

namespace cascade {

/// Where the unit of probability has gone by time t, and what a detector of
/// efficiency eta on the radiated channel makes of it.
struct ChannelProbabilities {
    double t = 0.0;
    double p_no = 1.0;   // survival |psi|^2
    double p_rad = 0.0;  // integrated radiated-channel rate
    double p_abs = 0.0;  // integrated mirror-loss rate, both cavities
    double eta = 1.0;
    double p0 = 1.0;     // no-click probability 1 - eta * p_rad
};

/// Composite Simpson quadrature of the jump rates along the closed-form
/// protocol amplitudes at step quad_step, split exactly at schedule.tbar.
/// Throws NegativeTime for t < 0 and StepTooLarge for quad_step <= 0.
ChannelProbabilities channel_probabilities(const SystemParams& p,
                                           const Schedule& s, double t,
                                           double eta,
                                           double quad_step = 1e-3);

/// Same quantities at every time in `times` (strictly increasing, starting
/// at >= 0), accumulating one quadrature pass instead of restarting at 0.
std::vector<ChannelProbabilities> channel_probability_series(
    const SystemParams& p, const Schedule& s, const std::vector<double>& times,
    double eta, double quad_step = 1e-3);

/// Atomic state conditioned on no jump of any kind having occurred:
/// populations and coherence divided by p_no, with the photonic weight
/// (|beta|^2 + |delta|^2)/p_no collapsed onto |00>.
/// Throws ZeroSurvivalProbability when p_no vanishes.
DensityMatrix rho_atoms_given_no_loss(const AmplitudeState& s);

/// Atomic state conditioned on the detector not having clicked: the no-loss
/// state with weight p_no/p0 mixed with |00><00| carrying the undetected
/// radiation and the mirror losses, ((1-eta) p_rad + p_abs)/p0.
struct ConditionalState {
    double weight_no = 1.0;      // p_no / p0
    double weight_vacuum = 0.0;  // ((1-eta) p_rad + p_abs) / p0
    DensityMatrix rho;
};

/// Throws ZeroNullClickProbability when p0 vanishes.
ConditionalState conditional_state(const AmplitudeState& s,
                                   const ChannelProbabilities& probs);

/// Concurrence of the no-click conditional state, 2|alpha||gamma|/p0,
/// clamped into [0, 1].
double concurrence_conditional(const AmplitudeState& s,
                               const ChannelProbabilities& probs);

/// Classical measurement records of a run: the radiated channel passes a
/// beam splitter of transmittivity sqrt(eta) into the detector, so a
/// radiated jump clicks with probability eta and is otherwise lost in
/// reflection; mirror-loss jumps never click.
struct RecordStatistics {
    std::size_t n = 0;
    std::size_t no_jump = 0;
    std::size_t click = 0;           // detected transmitted photon
    std::size_t reflected_loss = 0;  // radiated photon lost at the splitter
    std::size_t mirror_loss = 0;     // jump through either kappa_loss channel
    double p0_empirical = 1.0;       // fraction of records without a click
};

/// One trajectory's classical record: the underlying jump, if any, plus the
/// detector outcome after the beam splitter.
struct DetectionRecord {
    TrajectoryRecord trajectory;
    bool clicked = false;
};

std::vector<DetectionRecord> simulate_detection_records(
    const SystemParams& p, const Schedule& s, double eta, std::size_t n,
    std::uint64_t master_seed, const TrajectoryOptions& o = {});

RecordStatistics tally_records(const std::vector<DetectionRecord>& records);

/// tally_records over simulate_detection_records with the same arguments.
RecordStatistics simulate_records(const SystemParams& p, const Schedule& s,
                                  double eta, std::size_t n,
                                  std::uint64_t master_seed,
                                  const TrajectoryOptions& o = {});

}  // namespace cascade
