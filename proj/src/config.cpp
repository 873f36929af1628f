#include "cascade/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <string>

#include "cascade/errors.hpp"

namespace cascade {

namespace {

const std::set<std::string> known_keys = {
    "g_a",     "omega_a",      "delta_a", "kappa_a", "kappa_loss_a",
    "gamma_a", "gamma_prime_a",
    "g_b",     "omega_b",      "delta_b", "kappa_b", "kappa_loss_b",
    "gamma_b", "gamma_prime_b",
    "phi",     "eta"};

std::string strip(const std::string& s) {
    std::size_t lo = 0, hi = s.size();
    while (lo < hi && std::isspace(static_cast<unsigned char>(s[lo]))) ++lo;
    while (hi > lo && std::isspace(static_cast<unsigned char>(s[hi - 1]))) --hi;
    return s.substr(lo, hi - lo);
}

std::string at_line(const std::string& path, int line) {
    return path + ":" + std::to_string(line) + ": ";
}

}  // namespace

Config parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MissingFile("cannot open config file " + path);

    Config cfg;
    cfg.path = path;
    std::map<std::string, int> line_of;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string text = strip(line);
        if (text.empty() || text[0] == '#') continue;
        const std::size_t eq = text.find('=');
        if (eq == std::string::npos)
            throw ParseError(at_line(path, lineno) + "expected key = value");
        const std::string key = strip(text.substr(0, eq));
        const std::string value = strip(text.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ParseError(at_line(path, lineno) + "expected key = value");
        if (!known_keys.count(key))
            throw UnknownKey(at_line(path, lineno) + "unknown key '" + key + "'");
        if (cfg.entries.count(key))
            throw ParseError(at_line(path, lineno) + "duplicate key '" + key +
                             "' (first set on line " +
                             std::to_string(line_of[key]) + ")");
        std::size_t used = 0;
        double parsed = 0.0;
        try {
            parsed = std::stod(value, &used);
        } catch (const std::exception&) {
            throw ParseError(at_line(path, lineno) + "cannot parse value '" +
                             value + "'");
        }
        if (used != value.size())
            throw ParseError(at_line(path, lineno) + "cannot parse value '" +
                             value + "'");
        cfg.entries[key] = parsed;
        line_of[key] = lineno;
    }

    for (const char* req : {"g_a", "omega_a", "delta_a", "kappa_a"}) {
        if (!cfg.entries.count(req))
            throw ParseError(path + ": missing required key '" +
                             std::string(req) + "'");
    }

    auto pick = [&](const std::string& key, double fallback) {
        auto it = cfg.entries.find(key);
        return it == cfg.entries.end() ? fallback : it->second;
    };

    SystemParams p;
    p.a.g = pick("g_a", 0.0);
    p.a.omega = pick("omega_a", 0.0);
    p.a.delta = pick("delta_a", 0.0);
    p.a.kappa = pick("kappa_a", 0.0);
    p.a.kappa_loss = pick("kappa_loss_a", 0.0);
    p.a.gamma = pick("gamma_a", 0.0);
    p.a.gamma_prime = pick("gamma_prime_a", 0.0);
    // missing _b keys mirror the _a side
    p.b.g = pick("g_b", p.a.g);
    p.b.omega = pick("omega_b", p.a.omega);
    p.b.delta = pick("delta_b", p.a.delta);
    p.b.kappa = pick("kappa_b", p.a.kappa);
    p.b.kappa_loss = pick("kappa_loss_b", p.a.kappa_loss);
    p.b.gamma = pick("gamma_b", p.a.gamma);
    p.b.gamma_prime = pick("gamma_prime_b", p.a.gamma_prime);
    p.phi = pick("phi", 0.0);
    cfg.eta = pick("eta", 0.88);
    if (!std::isfinite(cfg.eta))
        throw NonFinite(at_line(path, line_of.count("eta") ? line_of["eta"] : 0) +
                        "eta is not finite");
    if (cfg.eta < 0.0 || cfg.eta > 1.0)
        throw ParseError(at_line(path, line_of.count("eta") ? line_of["eta"] : 0) +
                         "eta must be in [0, 1]");

    try {
        cfg.params = validate(p);
    } catch (const Error& e) {
        // point at the line that set the offending value when we can
        std::string msg = e.what();
        for (const auto& [key, ln] : line_of) {
            const std::string bare = key;
            if (msg.compare(0, bare.size(), bare) == 0) {
                msg = at_line(path, ln) + msg;
                break;
            }
        }
        if (dynamic_cast<const NonPositiveDetuning*>(&e))
            throw NonPositiveDetuning(msg);
        if (dynamic_cast<const NegativeRate*>(&e)) throw NegativeRate(msg);
        if (dynamic_cast<const NonFinite*>(&e)) throw NonFinite(msg);
        throw;
    }
    return cfg;
}

}  // namespace cascade
