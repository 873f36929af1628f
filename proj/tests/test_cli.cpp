#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "cascade/analytic.hpp"
#include "cascade/config.hpp"
#include "cascade/detection.hpp"
#include "cascade/entanglement.hpp"
#include "cascade/params.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string stderr_text;
};

std::string slurp(const fs::path& path) {
    std::ifstream f(path, std::ios::binary);
    REQUIRE_MESSAGE(f.good(), "missing file ", path.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

/// Run the tool with `args`, capturing the exit code and stderr.
RunResult run_tool(const std::string& args, const fs::path& scratch) {
    fs::create_directories(scratch);
    const fs::path err = scratch / "stderr.txt";
    const std::string cmd = std::string(CASCADE_SIM_PATH) + " " + args +
                            " 2> " + err.string();
    const int raw = std::system(cmd.c_str());
    RunResult res;
    res.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    res.stderr_text = slurp(err);
    return res;
}

/// Fresh output directory named after the test, plus the common flags.
fs::path out_dir(const std::string& name) {
    fs::path dir = fs::path("cli_out") / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string baseline_args(const std::string& command, const fs::path& out) {
    return command + " --config " + std::string(CASCADE_BASELINE_CONFIG) +
           " --out " + out.string();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
    std::ifstream f(path);
    REQUIRE_MESSAGE(f.good(), "missing file ", path.string());
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(f, line)) {
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (line.size() && line.back() == ',') fields.emplace_back();
        rows.push_back(std::move(fields));
    }
    return rows;
}

}  // namespace

TEST_CASE("conditional manifest scalars match a library recompute") {
    const fs::path out = out_dir("conditional_recompute");
    RunResult res = run_tool(baseline_args("conditional", out), out);
    REQUIRE(res.exit_code == 0);

    const json manifest = json::parse(slurp(out / "conditional.manifest.json"));
    using namespace cascade;
    Config cfg = parse_config(CASCADE_BASELINE_CONFIG);
    const SystemParams& p = cfg.params;
    const double t_max = 100.0 / p.derived_a.bandwidth;
    const double dt = 1e-3 / p.derived_a.bandwidth;

    const double tbar = find_tbar(p, 0.0, t_max);
    CHECK(manifest["schedule"]["tbar"].get<double>() ==
          doctest::Approx(tbar).epsilon(1e-14));
    CHECK(manifest["schedule"]["tbar_mode"] == "auto");

    const json& r = manifest["results"];
    CHECK(r["tbar"].get<double>() == doctest::Approx(tbar).epsilon(1e-14));
    const AmplitudeState at_tbar = amplitudes_driven(p, tbar);
    CHECK(r["c_at_tbar"].get<double>() ==
          doctest::Approx(concurrence_atoms(at_tbar)).epsilon(1e-14));

    const Schedule sched{tbar};
    const ChannelProbabilities cp =
        channel_probabilities(p, sched, t_max, cfg.eta, dt);
    CHECK(r["p_no_inf"].get<double>() ==
          doctest::Approx(cp.p_no).epsilon(1e-14));
    CHECK(r["p_rad_inf"].get<double>() ==
          doctest::Approx(cp.p_rad).epsilon(1e-14));
    CHECK(r["p_abs_inf"].get<double>() ==
          doctest::Approx(cp.p_abs).epsilon(1e-14));
    CHECK(r["p0"].get<double>() == doctest::Approx(cp.p0).epsilon(1e-14));
    const AmplitudeState at_end = evolve_protocol(p, sched, t_max);
    CHECK(r["c_conditional"].get<double>() ==
          doctest::Approx(concurrence_conditional(at_end, cp)).epsilon(1e-14));

    // the config echo reflects the parsed parameters
    CHECK(manifest["config"]["kappa_a"].get<double>() == p.a.kappa);
    CHECK(manifest["config"]["eta"].get<double>() == cfg.eta);
    CHECK(manifest["tool"]["name"] == "cascade-sim");
}

TEST_CASE("conditional csv has the documented header and long-time row") {
    const fs::path out = out_dir("conditional_csv");
    RunResult res = run_tool(baseline_args("conditional", out), out);
    REQUIRE(res.exit_code == 0);

    auto rows = read_csv(out / "conditional.csv");
    REQUIRE(rows.size() > 2);
    REQUIRE(rows.front().size() == 7);
    CHECK(rows.front()[0] == "t");
    CHECK(rows.front()[1] == "p_no");
    CHECK(rows.front()[2] == "p_rad");
    CHECK(rows.front()[3] == "p_abs");
    CHECK(rows.front()[4] == "p0");
    CHECK(rows.front()[5] == "c_at");
    CHECK(rows.front()[6] == "c_cond");

    const auto& last = rows.back();
    CHECK(std::stod(last[0]) == doctest::Approx(100.0));
    CHECK(std::stod(last[4]) == doctest::Approx(0.8763492428581079).epsilon(1e-6));
    CHECK(std::stod(last[6]) == doctest::Approx(0.7511530391616535).epsilon(1e-6));
    // conservation holds row by row
    for (std::size_t i = 1; i < rows.size(); i += 1000) {
        const double sum = std::stod(rows[i][1]) + std::stod(rows[i][2]) +
                           std::stod(rows[i][3]);
        CHECK(std::abs(sum - 1.0) < 1e-6);
    }
}

TEST_CASE("reruns into fresh directories are byte-identical") {
    const fs::path out1 = out_dir("rerun_a");
    const fs::path out2 = out_dir("rerun_b");
    REQUIRE(run_tool(baseline_args("fig5", out1), out1).exit_code == 0);
    REQUIRE(run_tool(baseline_args("fig5", out2), out2).exit_code == 0);

    CHECK(slurp(out1 / "fig5.csv") == slurp(out2 / "fig5.csv"));
    CHECK(slurp(out1 / "fig5.manifest.json") ==
          slurp(out2 / "fig5.manifest.json"));
}

TEST_CASE("stored-phase csv freezes c_at and drains c_cav") {
    const fs::path out = out_dir("fig5");
    REQUIRE(run_tool(baseline_args("fig5", out), out).exit_code == 0);

    const json manifest = json::parse(slurp(out / "fig5.manifest.json"));
    const double tbar = manifest["schedule"]["tbar"].get<double>();

    auto rows = read_csv(out / "fig5.csv");
    REQUIRE(rows.front() ==
            std::vector<std::string>{"t", "c_at", "c_cav"});
    std::string frozen;
    bool saw_tbar_row = false;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double t = std::stod(rows[i][0]);
        if (t < tbar - 1e-9) continue;  // csv times carry 12 digits
        if (frozen.empty()) {
            // the switch-off time itself is a sample point (12 csv digits)
            CHECK(std::stod(rows[i][0]) == doctest::Approx(tbar).epsilon(1e-9));
            saw_tbar_row = true;
            frozen = rows[i][1];
            continue;
        }
        // alpha and gamma no longer move, so all twelve digits repeat
        CHECK(rows[i][1] == frozen);
    }
    CHECK(saw_tbar_row);
    CHECK_FALSE(frozen.empty());
    CHECK(std::stod(rows.back()[2]) < 1e-6);
}

TEST_CASE("loss sweep records the peaks of each monitoring ratio") {
    const fs::path out = out_dir("fig4");
    REQUIRE(run_tool(baseline_args("fig4", out), out).exit_code == 0);

    const json manifest = json::parse(slurp(out / "fig4.manifest.json"));
    const json& sweep = manifest["results"]["kappa_sweep"];
    REQUIRE(sweep.size() == 3);
    const double want_ratio[] = {1.0, 0.9, 0.8};
    const double want_c[] = {0.7314137745998686, 0.6582723971398817,
                             0.5851310196798949};
    for (int i = 0; i < 3; ++i) {
        CHECK(sweep[i]["kappa_over_bandwidth"].get<double>() ==
              want_ratio[i]);
        CHECK(sweep[i]["c_at_tbar"].get<double>() ==
              doctest::Approx(want_c[i]).epsilon(1e-6));
    }

    auto rows = read_csv(out / "fig4.csv");
    REQUIRE(rows.front() ==
            std::vector<std::string>{"t", "c_at_ratio_1.0", "c_at_ratio_0.9",
                                     "c_at_ratio_0.8"});
}

TEST_CASE("trajectory records are reproducible and complete") {
    const fs::path out = out_dir("traj");
    const std::string extra = " --ntraj 200 --seed 7";
    REQUIRE(run_tool(baseline_args("trajectories", out) + extra, out)
                .exit_code == 0);

    auto rows = read_csv(out / "trajectories.csv");
    REQUIRE(rows.size() == 201);  // header + one line per trajectory
    REQUIRE(rows.front() == std::vector<std::string>{"trajectory", "jump_time",
                                                     "channel", "clicked"});
    std::size_t none = 0, rad = 0, mir = 0, clicks = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        REQUIRE(rows[i].size() == 4);
        CHECK(rows[i][0] == std::to_string(i - 1));
        if (rows[i][2] == "none") {
            ++none;
            CHECK(rows[i][1].empty());
            CHECK(rows[i][3] == "0");
        } else {
            CHECK_FALSE(rows[i][1].empty());
            CHECK(std::stod(rows[i][1]) >= 0.0);
            CHECK(std::stod(rows[i][1]) <= 100.0);
            if (rows[i][2] == "radiated")
                ++rad;
            else
                ++mir;
            if (rows[i][3] == "1") {
                ++clicks;
                CHECK(rows[i][2] == "radiated");
            }
        }
    }
    CHECK(none + rad + mir == 200);

    const json manifest = json::parse(slurp(out / "trajectories.manifest.json"));
    const json& rec = manifest["results"]["records"];
    CHECK(rec["n"].get<std::size_t>() == 200);
    CHECK(rec["no_jump"].get<std::size_t>() == none);
    CHECK(rec["click"].get<std::size_t>() == clicks);
    CHECK(rec["mirror_loss"].get<std::size_t>() == mir);
    CHECK(rec["click"].get<std::size_t>() +
              rec["reflected_loss"].get<std::size_t>() ==
          rad);
    CHECK(rec["p0_empirical"].get<double>() ==
          doctest::Approx(1.0 - clicks / 200.0).epsilon(1e-12));
    CHECK(manifest["seeds"]["master"].get<std::uint64_t>() == 7);

    // same seed, same records; a different seed moves them
    const fs::path out2 = out_dir("traj_rerun");
    REQUIRE(run_tool(baseline_args("trajectories", out2) + extra, out2)
                .exit_code == 0);
    CHECK(slurp(out / "trajectories.csv") == slurp(out2 / "trajectories.csv"));

    const fs::path out3 = out_dir("traj_reseed");
    REQUIRE(run_tool(baseline_args("trajectories", out3) +
                         " --ntraj 200 --seed 8",
                     out3)
                .exit_code == 0);
    CHECK(slurp(out / "trajectories.csv") != slurp(out3 / "trajectories.csv"));
}

TEST_CASE("flag overrides land in the schedule, grid and results") {
    const fs::path out = out_dir("overrides");
    REQUIRE(run_tool(baseline_args("conditional", out) +
                         " --tbar 10 --eta 0.5 --tmax 50",
                     out)
                .exit_code == 0);

    const json manifest = json::parse(slurp(out / "conditional.manifest.json"));
    CHECK(manifest["schedule"]["tbar"].get<double>() == 10.0);
    CHECK(manifest["schedule"]["tbar_mode"] == "fixed");
    CHECK(manifest["config"]["eta"].get<double>() == 0.5);
    CHECK(manifest["grid"]["t_max"].get<double>() == 50.0);

    const json& r = manifest["results"];
    CHECK(r["tbar"].get<double>() == 10.0);
    CHECK(r["p0"].get<double>() ==
          doctest::Approx(1.0 - 0.5 * r["p_rad_inf"].get<double>())
              .epsilon(1e-14));
}

TEST_CASE("bad invocations fail loudly") {
    const fs::path out = out_dir("failures");

    RunResult unknown = run_tool(baseline_args("frobnicate", out), out);
    CHECK(unknown.exit_code == 1);
    CHECK(unknown.stderr_text.find("unknown command") != std::string::npos);
    CHECK(unknown.stderr_text.find("find-tbar") != std::string::npos);

    RunResult missing = run_tool("fig3 --out " + out.string(), out);
    CHECK(missing.exit_code != 0);

    // a config that parses but fails validation names its line
    const fs::path bad_cfg = out / "bad.cfg";
    {
        std::ofstream f(bad_cfg);
        f << "g_a = 10.0\nomega_a = 10.0\ndelta_a = 1000.0\n"
          << "kappa_a = -1.0\n";
    }
    RunResult invalid = run_tool(
        "fig3 --config " + bad_cfg.string() + " --out " + out.string(), out);
    CHECK(invalid.exit_code == 1);
    CHECK(invalid.stderr_text.find("cascade-sim:") != std::string::npos);
    CHECK(invalid.stderr_text.find(":4:") != std::string::npos);

    RunResult bad_tbar =
        run_tool(baseline_args("fig5", out) + " --tbar sometimes", out);
    CHECK(bad_tbar.exit_code == 1);
    CHECK(bad_tbar.stderr_text.find("--tbar") != std::string::npos);
}
