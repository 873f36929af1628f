#include "cascade/params.hpp"

#include <cmath>
#include <string>

#include "cascade/errors.hpp"

namespace cascade {

DerivedParams derive(const SubsystemParams& s) {
    DerivedParams d;
    d.g_bar = -s.g * s.omega / s.delta;
    d.stark_laser = -s.omega * s.omega / s.delta;
    d.stark_cavity = -s.g * s.g / s.delta;
    d.bandwidth = s.kappa + s.kappa_loss;
    d.gamma_eff = s.gamma / (s.delta * s.delta);
    d.gamma_eff_prime = s.gamma_prime / (s.delta * s.delta);
    return d;
}

namespace {

void validate_subsystem(const SubsystemParams& s, const std::string& tag) {
    const struct {
        const char* name;
        double value;
    } rates[] = {{"g", s.g},           {"omega", s.omega},
                 {"kappa", s.kappa},   {"kappa_loss", s.kappa_loss},
                 {"gamma", s.gamma},   {"gamma_prime", s.gamma_prime}};
    for (const auto& r : rates) {
        if (!std::isfinite(r.value))
            throw NonFinite(std::string(r.name) + tag + " is not finite");
        if (r.value < 0.0)
            throw NegativeRate(std::string(r.name) + tag + " must be >= 0, got " +
                               std::to_string(r.value));
    }
    if (!std::isfinite(s.delta))
        throw NonFinite("delta" + tag + " is not finite");
    if (s.delta <= 0.0)
        throw NonPositiveDetuning("delta" + tag + " must be > 0, got " +
                                  std::to_string(s.delta));
    if (s.kappa + s.kappa_loss <= 0.0)
        throw NegativeRate("kappa" + tag + " + kappa_loss" + tag +
                           " must be > 0");
}

}  // namespace

SystemParams validate(SystemParams p) {
    validate_subsystem(p.a, "_a");
    validate_subsystem(p.b, "_b");
    if (!std::isfinite(p.phi)) throw NonFinite("phi is not finite");
    constexpr double two_pi = 6.283185307179586476925286766559;
    p.phi = std::fmod(p.phi, two_pi);
    if (p.phi < 0.0) p.phi += two_pi;
    p.derived_a = derive(p.a);
    p.derived_b = derive(p.b);
    return p;
}

AdequacyReport raman_adequacy(const SystemParams& p) {
    AdequacyReport r;
    r.g_ratio_a = p.a.g / p.a.delta;
    r.omega_ratio_a = p.a.omega / p.a.delta;
    r.g_ratio_b = p.b.g / p.b.delta;
    r.omega_ratio_b = p.b.omega / p.b.delta;
    r.spont_weight = (p.a.gamma + p.a.gamma_prime) / p.a.delta +
                     (p.b.gamma + p.b.gamma_prime) / p.b.delta;
    r.flagged = r.g_ratio_a > adequacy_threshold ||
                r.omega_ratio_a > adequacy_threshold ||
                r.g_ratio_b > adequacy_threshold ||
                r.omega_ratio_b > adequacy_threshold;
    return r;
}

}  // namespace cascade
