#pragma once

#include <complex>
#include <optional>

#include "cascade/params.hpp"

namespace cascade {

/// Joint single-excitation amplitudes at time t.  alpha: atom A flipped;
/// beta: photon in cavity A; gamma: atom B flipped; delta: photon in
/// cavity B.  The missing weight 1 - |alpha|^2 - ... is the shared ground
/// state reached after a quantum jump.
struct AmplitudeState {
    double t = 0.0;
    std::complex<double> alpha{1.0, 0.0};
    std::complex<double> beta{0.0, 0.0};
    std::complex<double> gamma{0.0, 0.0};
    std::complex<double> delta{0.0, 0.0};
    bool laser_on = true;
};

/// Protocol schedule: if tbar is set, both driving lasers switch off at that
/// time and the atomic amplitudes freeze.
struct Schedule {
    std::optional<double> tbar;
};

/// Floor of the node-clustering radius in the closed forms: decay exponents
/// closer than max(singular_threshold, 0.5/t) are treated as one confluent
/// cluster and evaluated by a series instead of divided by their gap.
inline constexpr double singular_threshold = 1e-9;

/// Times (in units of the subsystem-A bandwidth) beyond this are clamped:
/// the evolving amplitudes are returned as exactly 0.
inline constexpr double max_time_bandwidths = 1e4;

/// Complex decay-splitting rate Lambda; principal square root of
/// (K + 2i*stark_cavity)^2/4 - 4*g_bar^2 - i*(K + 2i*stark_cavity)*stark_laser
/// - stark_laser^2.  Physical amplitudes are invariant under Lambda -> -Lambda.
std::complex<double> lambda_k(const DerivedParams& d);

/// Textbook building blocks of the driven solution, exposed for diagnostics
/// and cross-checks.  The raw f/g/h factors grow exponentially in t for some
/// parameters; evaluate at moderate times only.
struct ClosedFormIntermediates {
    std::complex<double> lambda_a;
    std::complex<double> lambda_b;
    std::complex<double> upsilon;  // (K_a - K_b + 2i(stark_cav_a - stark_cav_b))/4
    double theta = 0.0;            // (stark_laser_a - stark_laser_b)/2
    std::complex<double> f_plus, f_minus;
    std::complex<double> g_plus, g_minus;
    std::complex<double> h_plus, h_minus;
};

ClosedFormIntermediates intermediates(const SystemParams& p, double t);

/// Closed-form amplitudes with both lasers on, starting from
/// (alpha, beta, gamma, delta) = (1, 0, 0, 0) at t = 0.
/// Throws NegativeTime for t < 0.
AmplitudeState amplitudes_driven(const SystemParams& p, double t);

/// Closed-form amplitudes for t >= at_tbar.t after the lasers switch off at
/// at_tbar: atomic amplitudes freeze, photonic ones decay through the
/// cascade.  Throws TimeBeforeSwitchOff for t < at_tbar.t.
AmplitudeState amplitudes_stored(const SystemParams& p,
                                 const AmplitudeState& at_tbar, double t);

/// Driven evolution up to schedule.tbar, stored afterwards.
AmplitudeState evolve_protocol(const SystemParams& p, const Schedule& s,
                               double t);

/// No-jump (survival) probability |alpha|^2 + |beta|^2 + |gamma|^2 +
/// |delta|^2, clamped into [0, 1].
double p_no(const AmplitudeState& s);

/// Leftmost maximizer of the atomic concurrence 2|alpha(t)||gamma(t)| over
/// [t_lo, t_hi]: grid scan at step 0.01 plus quadratic refinement around the
/// best grid point.  Throws EmptyWindow if t_hi <= t_lo or t_lo < 0.
double find_tbar(const SystemParams& p, double t_lo, double t_hi);

}  // namespace cascade
