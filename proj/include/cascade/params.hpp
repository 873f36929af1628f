#pragma once

namespace cascade {

/// Raw parameters of one atom-cavity subsystem.  Everything is an angular
/// frequency (hbar = 1); pick one unit, conventionally the total cavity
/// bandwidth of subsystem A, and express all inputs and times in it.
struct SubsystemParams {
    double g = 0.0;            // atom-cavity coupling
    double omega = 0.0;        // laser Rabi frequency
    double delta = 0.0;        // detuning of the far-off-resonant upper level
    double kappa = 0.0;        // cavity decay into the monitored cascade channel
    double kappa_loss = 0.0;   // cavity decay into unmonitored mirror loss
    double gamma = 0.0;        // upper-level decay back to the initial state
    double gamma_prime = 0.0;  // upper-level decay to the target state
};

/// Effective quantities after adiabatic elimination of the upper level.
struct DerivedParams {
    double g_bar = 0.0;            // Raman coupling      -g*omega/delta
    double stark_laser = 0.0;      // laser Stark shift   -omega^2/delta
    double stark_cavity = 0.0;     // cavity Stark shift  -g^2/delta
    double bandwidth = 0.0;        // kappa + kappa_loss
    double gamma_eff = 0.0;        // residual scattering  gamma/delta^2
    double gamma_eff_prime = 0.0;  // residual scattering  gamma_prime/delta^2
};

/// Source subsystem `a` drives target subsystem `b` through a unidirectional
/// channel with propagation phase `phi`.
struct SystemParams {
    SubsystemParams a;
    SubsystemParams b;
    double phi = 0.0;
    DerivedParams derived_a;
    DerivedParams derived_b;
};

/// Effective parameters for one subsystem.  Pure arithmetic, no validation.
DerivedParams derive(const SubsystemParams& s);

/// Checks physical ranges (rates >= 0, delta > 0, kappa + kappa_loss > 0,
/// everything finite), normalizes phi into [0, 2*pi), and fills the derived
/// fields.  Throws NonPositiveDetuning, NegativeRate or NonFinite.
SystemParams validate(SystemParams p);

/// Diagnostics for the far-detuned (Raman) approximation.
struct AdequacyReport {
    double g_ratio_a = 0.0;      // g_a / delta_a
    double omega_ratio_a = 0.0;  // omega_a / delta_a
    double g_ratio_b = 0.0;
    double omega_ratio_b = 0.0;
    double spont_weight = 0.0;   // sum over subsystems of (gamma+gamma')/delta
    bool flagged = false;        // any ratio above adequacy_threshold
};

/// Advisory threshold on g/delta and omega/delta; never gates computation.
inline constexpr double adequacy_threshold = 0.05;

AdequacyReport raman_adequacy(const SystemParams& p);

}  // namespace cascade
