// cascade-sim: runs named experiments on the cascaded pair from a config
// file and writes <command>.csv plus <command>.manifest.json into --out.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cascade/analytic.hpp"
#include "cascade/config.hpp"
#include "cascade/detection.hpp"
#include "cascade/dynamics.hpp"
#include "cascade/entanglement.hpp"
#include "cascade/errors.hpp"
#include "cascade/params.hpp"
#include "cascade/version.hpp"

namespace {

using nlohmann::ordered_json;
using namespace cascade;

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

/// Everything a run needs after flags and config are reconciled.  Times
/// default to multiples of 1/bandwidth_a so configs in other units keep the
/// same dimensionless coverage.
struct RunContext {
    Config cfg;
    std::string command;
    std::filesystem::path out_dir;
    double t_max = 0.0;
    double dt = 0.0;
    double csv_step = 0.0;
    double eta = 0.88;
    std::uint64_t seed = 1;
    std::uint64_t ntraj = 10000;
    std::optional<double> tbar;  // resolved switch-off time, if scheduled
    std::string tbar_mode;       // "auto" or "fixed"
};

/// Sample times 0, step, 2*step, ..., t_max with t_bar spliced in exactly.
std::vector<double> sample_times(double t_max, double step,
                                 std::optional<double> tbar) {
    std::vector<double> ts;
    const double tiny = 1e-12 * std::max(1.0, t_max);
    for (std::size_t k = 0;; ++k) {
        const double t = static_cast<double>(k) * step;
        if (t >= t_max - tiny) break;
        ts.push_back(t);
    }
    ts.push_back(t_max);
    if (tbar && *tbar > 0.0 && *tbar < t_max) {
        auto it = std::lower_bound(ts.begin(), ts.end(), *tbar);
        if (it != ts.end() && std::abs(*it - *tbar) <= tiny)
            *it = *tbar;
        else if (it != ts.begin() && std::abs(*(it - 1) - *tbar) <= tiny)
            *(it - 1) = *tbar;
        else
            ts.insert(it, *tbar);
    }
    return ts;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream f(path);
    if (!f) throw MissingFile("cannot open '" + path.string() + "' for writing");
    return f;
}

/// The scalar results block shared by every command: switch-off time, peak
/// concurrence, long-time channel probabilities and the conditional figures.
ordered_json scalar_results(const RunContext& rc) {
    const SystemParams& p = rc.cfg.params;
    const double tbar = rc.tbar ? *rc.tbar : find_tbar(p, 0.0, rc.t_max);
    const Schedule sched{tbar};
    const AmplitudeState at_tbar = amplitudes_driven(p, tbar);
    const double c_at_tbar = concurrence_atoms(at_tbar);
    const ChannelProbabilities cp =
        channel_probabilities(p, sched, rc.t_max, rc.eta, rc.dt);
    const AmplitudeState at_end = evolve_protocol(p, sched, rc.t_max);
    const double c_cond = concurrence_conditional(at_end, cp);
    const double enhancement =
        c_at_tbar > 0.0 ? (c_cond / c_at_tbar - 1.0) * 100.0 : 0.0;
    return ordered_json{{"tbar", tbar},
                        {"c_at_tbar", c_at_tbar},
                        {"p_no_inf", cp.p_no},
                        {"p_rad_inf", cp.p_rad},
                        {"p_abs_inf", cp.p_abs},
                        {"p0", cp.p0},
                        {"c_conditional", c_cond},
                        {"enhancement_percent", enhancement}};
}

ordered_json derived_block(const DerivedParams& d) {
    return ordered_json{{"g_bar", d.g_bar},
                        {"stark_laser", d.stark_laser},
                        {"stark_cavity", d.stark_cavity},
                        {"bandwidth", d.bandwidth},
                        {"gamma_eff", d.gamma_eff},
                        {"gamma_eff_prime", d.gamma_eff_prime}};
}

ordered_json build_manifest(const RunContext& rc) {
    const SystemParams& p = rc.cfg.params;
    ordered_json j;
    j["tool"] = {{"name", "cascade-sim"}, {"version", version}};
    j["command"] = rc.command;
    j["config"] = {{"path", rc.cfg.path},
                   {"g_a", p.a.g},
                   {"omega_a", p.a.omega},
                   {"delta_a", p.a.delta},
                   {"kappa_a", p.a.kappa},
                   {"kappa_loss_a", p.a.kappa_loss},
                   {"gamma_a", p.a.gamma},
                   {"gamma_prime_a", p.a.gamma_prime},
                   {"g_b", p.b.g},
                   {"omega_b", p.b.omega},
                   {"delta_b", p.b.delta},
                   {"kappa_b", p.b.kappa},
                   {"kappa_loss_b", p.b.kappa_loss},
                   {"gamma_b", p.b.gamma},
                   {"gamma_prime_b", p.b.gamma_prime},
                   {"phi", p.phi},
                   {"eta", rc.eta}};
    j["derived"] = {{"a", derived_block(p.derived_a)},
                    {"b", derived_block(p.derived_b)}};
    const AdequacyReport adequacy = raman_adequacy(p);
    j["adequacy"] = {{"g_ratio_a", adequacy.g_ratio_a},
                     {"omega_ratio_a", adequacy.omega_ratio_a},
                     {"g_ratio_b", adequacy.g_ratio_b},
                     {"omega_ratio_b", adequacy.omega_ratio_b},
                     {"spont_weight", adequacy.spont_weight},
                     {"flagged", adequacy.flagged}};
    j["grid"] = {{"t_max", rc.t_max}, {"dt", rc.dt}, {"csv_step", rc.csv_step}};
    j["schedule"] = {
        {"tbar", rc.tbar ? ordered_json(*rc.tbar) : ordered_json(nullptr)},
        {"tbar_mode", rc.tbar_mode}};
    j["seeds"] = {{"master", rc.seed}, {"ntraj", rc.ntraj}};
    j["results"] = scalar_results(rc);
    j["notes"] = ordered_json::array(
        {"t_max and dt default to 100 and 1e-3 in units of 1/bandwidth_a; "
         "long-time probabilities are evaluated at t_max",
         "detector dark counts are not simulated; they would only reduce "
         "the no-click probability p0"});
    return j;
}

void write_manifest(const RunContext& rc, ordered_json manifest) {
    auto f = open_output(rc.out_dir / (rc.command + ".manifest.json"));
    f << manifest.dump(2) << "\n";
}

void run_fig3(const RunContext& rc) {
    auto csv = open_output(rc.out_dir / (rc.command + ".csv"));
    csv << "t,alpha_sq,beta_sq,gamma_sq,delta_sq\n";
    for (double t : sample_times(rc.t_max, rc.csv_step, std::nullopt)) {
        const AmplitudeState st = amplitudes_driven(rc.cfg.params, t);
        csv << fmt(t) << ',' << fmt(std::norm(st.alpha)) << ','
            << fmt(std::norm(st.beta)) << ',' << fmt(std::norm(st.gamma))
            << ',' << fmt(std::norm(st.delta)) << '\n';
    }
    write_manifest(rc, build_manifest(rc));
}

/// Rescale both subsystems to a new kappa / (kappa + kappa_loss) at fixed
/// total bandwidth, then refresh the derived parameters.
SystemParams with_kappa_ratio(SystemParams p, double ratio) {
    for (SubsystemParams* s : {&p.a, &p.b}) {
        const double bandwidth = s->kappa + s->kappa_loss;
        s->kappa = ratio * bandwidth;
        s->kappa_loss = (1.0 - ratio) * bandwidth;
    }
    return validate(p);
}

void run_fig4(const RunContext& rc) {
    const std::vector<double> ratios{1.0, 0.9, 0.8};
    std::vector<SystemParams> variants;
    for (double r : ratios) variants.push_back(with_kappa_ratio(rc.cfg.params, r));

    auto csv = open_output(rc.out_dir / (rc.command + ".csv"));
    csv << "t,c_at_ratio_1.0,c_at_ratio_0.9,c_at_ratio_0.8\n";
    for (double t : sample_times(rc.t_max, rc.csv_step, std::nullopt)) {
        csv << fmt(t);
        for (const SystemParams& v : variants)
            csv << ',' << fmt(concurrence_atoms(amplitudes_driven(v, t)));
        csv << '\n';
    }

    ordered_json manifest = build_manifest(rc);
    ordered_json sweep = ordered_json::array();
    for (std::size_t i = 0; i < ratios.size(); ++i) {
        const double tbar = find_tbar(variants[i], 0.0, rc.t_max);
        sweep.push_back(
            {{"kappa_over_bandwidth", ratios[i]},
             {"tbar", tbar},
             {"c_at_tbar",
              concurrence_atoms(amplitudes_driven(variants[i], tbar))}});
    }
    manifest["results"]["kappa_sweep"] = sweep;
    write_manifest(rc, manifest);
}

void run_fig5(const RunContext& rc) {
    const Schedule sched{rc.tbar};
    auto csv = open_output(rc.out_dir / (rc.command + ".csv"));
    csv << "t,c_at,c_cav\n";
    for (double t : sample_times(rc.t_max, rc.csv_step, rc.tbar)) {
        const AmplitudeState st = evolve_protocol(rc.cfg.params, sched, t);
        csv << fmt(t) << ',' << fmt(concurrence_atoms(st)) << ','
            << fmt(concurrence_cavities(st)) << '\n';
    }
    write_manifest(rc, build_manifest(rc));
}

void run_conditional(const RunContext& rc) {
    const Schedule sched{rc.tbar};
    const std::vector<double> times =
        sample_times(rc.t_max, rc.csv_step, rc.tbar);
    const std::vector<ChannelProbabilities> series =
        channel_probability_series(rc.cfg.params, sched, times, rc.eta, rc.dt);

    auto csv = open_output(rc.out_dir / (rc.command + ".csv"));
    csv << "t,p_no,p_rad,p_abs,p0,c_at,c_cond\n";
    for (const ChannelProbabilities& cp : series) {
        const AmplitudeState st = evolve_protocol(rc.cfg.params, sched, cp.t);
        csv << fmt(cp.t) << ',' << fmt(cp.p_no) << ',' << fmt(cp.p_rad) << ','
            << fmt(cp.p_abs) << ',' << fmt(cp.p0) << ','
            << fmt(concurrence_atoms(st)) << ','
            << fmt(concurrence_conditional(st, cp)) << '\n';
    }
    write_manifest(rc, build_manifest(rc));
}

void run_trajectories(const RunContext& rc) {
    const Schedule sched{rc.tbar};
    TrajectoryOptions opts;
    opts.t_max = rc.t_max;
    const std::vector<DetectionRecord> records = simulate_detection_records(
        rc.cfg.params, sched, rc.eta, rc.ntraj, rc.seed, opts);

    auto csv = open_output(rc.out_dir / (rc.command + ".csv"));
    csv << "trajectory,jump_time,channel,clicked\n";
    for (std::size_t i = 0; i < records.size(); ++i) {
        const TrajectoryRecord& t = records[i].trajectory;
        csv << i << ',';
        if (t.jump_time) csv << fmt(*t.jump_time);
        csv << ',';
        if (!t.channel)
            csv << "none";
        else if (*t.channel == JumpChannel::radiated)
            csv << "radiated";
        else if (*t.channel == JumpChannel::mirror_a)
            csv << "mirror_a";
        else
            csv << "mirror_b";
        csv << ',' << (records[i].clicked ? 1 : 0) << '\n';
    }

    const RecordStatistics stats = tally_records(records);
    ordered_json manifest = build_manifest(rc);
    manifest["results"]["records"] = {
        {"n", stats.n},
        {"no_jump", stats.no_jump},
        {"click", stats.click},
        {"reflected_loss", stats.reflected_loss},
        {"mirror_loss", stats.mirror_loss},
        {"p0_empirical", stats.p0_empirical}};
    write_manifest(rc, manifest);
}

void run_find_tbar(const RunContext& rc) {
    auto csv = open_output(rc.out_dir / (rc.command + ".csv"));
    csv << "t,c_at\n";
    for (double t : sample_times(rc.t_max, rc.csv_step, std::nullopt)) {
        csv << fmt(t) << ','
            << fmt(concurrence_atoms(amplitudes_driven(rc.cfg.params, t)))
            << '\n';
    }
    write_manifest(rc, build_manifest(rc));
}

bool known_command(const std::string& c) {
    return c == "fig3" || c == "fig4" || c == "fig5" || c == "conditional" ||
           c == "trajectories" || c == "find-tbar";
}

int run(const RunContext& rc) {
    if (rc.command == "fig3")
        run_fig3(rc);
    else if (rc.command == "fig4")
        run_fig4(rc);
    else if (rc.command == "fig5")
        run_fig5(rc);
    else if (rc.command == "conditional")
        run_conditional(rc);
    else if (rc.command == "trajectories")
        run_trajectories(rc);
    else if (rc.command == "find-tbar")
        run_find_tbar(rc);
    else
        throw UnknownCommand(
            "unknown command '" + rc.command +
            "' (expected fig3, fig4, fig5, conditional, trajectories or "
            "find-tbar)");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cascaded atom-cavity pair: closed-form curves, conditional "
                 "detection figures and quantum-jump trajectory records"};
    app.set_version_flag("--version", std::string(cascade::version));

    std::string command;
    std::string config_path;
    std::string out_dir = ".";
    std::string tbar_arg = "auto";
    double tmax_arg = -1.0;
    double dt_arg = -1.0;
    double eta_arg = -1.0;
    std::uint64_t seed = 1;
    std::uint64_t ntraj = 10000;

    app.add_option("command", command,
                   "One of fig3, fig4, fig5, conditional, trajectories, "
                   "find-tbar")
        ->required();
    app.add_option("--config", config_path, "Key = value parameter file")
        ->required();
    app.add_option("--out", out_dir, "Output directory (created if missing)");
    auto* tmax_opt =
        app.add_option("--tmax", tmax_arg,
                       "Time horizon (default 100/bandwidth_a)");
    auto* dt_opt = app.add_option(
        "--dt", dt_arg, "Quadrature step (default 1e-3/bandwidth_a)");
    auto* eta_opt = app.add_option(
        "--eta", eta_arg, "Detector efficiency, overrides the config value");
    app.add_option("--seed", seed, "Master seed for trajectory ensembles");
    app.add_option("--ntraj", ntraj, "Number of trajectories");
    app.add_option("--tbar", tbar_arg,
                   "Laser switch-off time: 'auto' locates the concurrence "
                   "peak, a number fixes it");

    CLI11_PARSE(app, argc, argv);

    try {
        if (!known_command(command))
            throw cascade::UnknownCommand(
                "unknown command '" + command +
                "' (expected fig3, fig4, fig5, conditional, trajectories or "
                "find-tbar)");
        RunContext rc;
        rc.cfg = cascade::parse_config(config_path);
        rc.command = command;
        rc.out_dir = out_dir;
        rc.seed = seed;
        rc.ntraj = ntraj;

        const double bandwidth = rc.cfg.params.derived_a.bandwidth;
        rc.t_max = tmax_opt->count() ? tmax_arg : 100.0 / bandwidth;
        rc.dt = dt_opt->count() ? dt_arg : 1e-3 / bandwidth;
        rc.csv_step = 0.01 / bandwidth;
        if (!(rc.t_max > 0.0) || !std::isfinite(rc.t_max))
            throw cascade::ParseError("--tmax must be positive and finite");
        if (!(rc.dt > 0.0) || !std::isfinite(rc.dt))
            throw cascade::ParseError("--dt must be positive and finite");

        rc.eta = eta_opt->count() ? eta_arg : rc.cfg.eta;
        if (!std::isfinite(rc.eta) || rc.eta < 0.0 || rc.eta > 1.0)
            throw cascade::ParseError("--eta must lie in [0, 1]");

        if (tbar_arg == "auto") {
            rc.tbar = cascade::find_tbar(rc.cfg.params, 0.0, rc.t_max);
            rc.tbar_mode = "auto";
        } else {
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(tbar_arg, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != tbar_arg.size() || !std::isfinite(v) || v < 0.0)
                throw cascade::ParseError(
                    "--tbar expects 'auto' or a non-negative time, got '" +
                    tbar_arg + "'");
            rc.tbar = v;
            rc.tbar_mode = "fixed";
        }

        std::error_code ec;
        std::filesystem::create_directories(rc.out_dir, ec);
        if (ec)
            throw cascade::Error("cannot create output directory " +
                                 rc.out_dir.string() + ": " + ec.message());
        return run(rc);
    } catch (const cascade::Error& e) {
        std::cerr << "cascade-sim: " << e.what() << "\n";
        return 1;
    }
}
