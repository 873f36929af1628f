#pragma once

#include <map>
#include <string>

#include "cascade/params.hpp"

namespace cascade {

/// A parsed run configuration: validated system parameters plus the detector
/// efficiency, with the raw key/value pairs kept for echoing into manifests.
struct Config {
    SystemParams params;
    double eta = 0.88;
    std::map<std::string, double> entries;
    std::string path;
};

/// Reads a plain-text key = value config file.
///
/// Keys: g_a, omega_a, delta_a, kappa_a, kappa_loss_a, gamma_a,
/// gamma_prime_a, the same with suffix _b, plus phi and eta.  Blank lines and
/// lines starting with '#' are ignored.  Missing _b keys default to the _a
/// values; kappa_loss, gamma and gamma_prime default to 0, phi to 0 and eta
/// to 0.88.  g_a, omega_a, delta_a and kappa_a are required.
///
/// Throws MissingFile, UnknownKey or ParseError (with line numbers), and the
/// validate() errors annotated with the line that set the offending value.
Config parse_config(const std::string& path);

}  // namespace cascade
