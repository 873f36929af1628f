// Python bindings for the cascade library.  Matrices cross as numpy arrays,
// errors as a mirrored exception hierarchy rooted at cascade_sim.Error.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "cascade/analytic.hpp"
#include "cascade/config.hpp"
#include "cascade/detection.hpp"
#include "cascade/dynamics.hpp"
#include "cascade/entanglement.hpp"
#include "cascade/errors.hpp"
#include "cascade/params.hpp"
#include "cascade/rng.hpp"
#include "cascade/version.hpp"

namespace py = pybind11;
using namespace cascade;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Raman-driven cascaded atom-cavity pair: closed-form dynamics, "
              "quantum-jump trajectories, concurrence and conditional "
              "detection";
    m.attr("__version__") = version;
    m.attr("adequacy_threshold") = adequacy_threshold;
    m.attr("singular_threshold") = singular_threshold;
    m.attr("max_time_bandwidths") = max_time_bandwidths;

    auto err = py::register_exception<Error>(m, "Error");
#define CASCADE_BIND_ERROR(Name) \
    py::register_exception<Name>(m, #Name, err.ptr())
    CASCADE_BIND_ERROR(NonPositiveDetuning);
    CASCADE_BIND_ERROR(NegativeRate);
    CASCADE_BIND_ERROR(NonFinite);
    CASCADE_BIND_ERROR(NegativeTime);
    CASCADE_BIND_ERROR(TimeBeforeSwitchOff);
    CASCADE_BIND_ERROR(EmptyWindow);
    CASCADE_BIND_ERROR(StepTooLarge);
    CASCADE_BIND_ERROR(NotADensityMatrix);
    CASCADE_BIND_ERROR(ZeroSurvivalProbability);
    CASCADE_BIND_ERROR(ZeroNullClickProbability);
    CASCADE_BIND_ERROR(MissingFile);
    CASCADE_BIND_ERROR(UnknownKey);
    CASCADE_BIND_ERROR(ParseError);
    CASCADE_BIND_ERROR(UnknownCommand);
#undef CASCADE_BIND_ERROR

    py::class_<SubsystemParams>(m, "SubsystemParams")
        .def(py::init<>())
        .def(py::init([](double g, double omega, double delta, double kappa,
                         double kappa_loss, double gamma, double gamma_prime) {
                 return SubsystemParams{g,     omega,      delta, kappa,
                                        kappa_loss, gamma, gamma_prime};
             }),
             py::arg("g"), py::arg("omega"), py::arg("delta"),
             py::arg("kappa"), py::arg("kappa_loss") = 0.0,
             py::arg("gamma") = 0.0, py::arg("gamma_prime") = 0.0)
        .def_readwrite("g", &SubsystemParams::g)
        .def_readwrite("omega", &SubsystemParams::omega)
        .def_readwrite("delta", &SubsystemParams::delta)
        .def_readwrite("kappa", &SubsystemParams::kappa)
        .def_readwrite("kappa_loss", &SubsystemParams::kappa_loss)
        .def_readwrite("gamma", &SubsystemParams::gamma)
        .def_readwrite("gamma_prime", &SubsystemParams::gamma_prime);

    py::class_<DerivedParams>(m, "DerivedParams")
        .def(py::init<>())
        .def_readonly("g_bar", &DerivedParams::g_bar)
        .def_readonly("stark_laser", &DerivedParams::stark_laser)
        .def_readonly("stark_cavity", &DerivedParams::stark_cavity)
        .def_readonly("bandwidth", &DerivedParams::bandwidth)
        .def_readonly("gamma_eff", &DerivedParams::gamma_eff)
        .def_readonly("gamma_eff_prime", &DerivedParams::gamma_eff_prime);

    py::class_<SystemParams>(m, "SystemParams")
        .def(py::init<>())
        .def(py::init([](const SubsystemParams& a, const SubsystemParams& b,
                         double phi) {
                 return SystemParams{a, b, phi, {}, {}};
             }),
             py::arg("a"), py::arg("b"), py::arg("phi") = 0.0)
        .def_readwrite("a", &SystemParams::a)
        .def_readwrite("b", &SystemParams::b)
        .def_readwrite("phi", &SystemParams::phi)
        .def_readonly("derived_a", &SystemParams::derived_a)
        .def_readonly("derived_b", &SystemParams::derived_b);

    m.def("derive", &derive, py::arg("subsystem"));
    m.def("validate", &validate, py::arg("params"));

    py::class_<AdequacyReport>(m, "AdequacyReport")
        .def_readonly("g_ratio_a", &AdequacyReport::g_ratio_a)
        .def_readonly("omega_ratio_a", &AdequacyReport::omega_ratio_a)
        .def_readonly("g_ratio_b", &AdequacyReport::g_ratio_b)
        .def_readonly("omega_ratio_b", &AdequacyReport::omega_ratio_b)
        .def_readonly("spont_weight", &AdequacyReport::spont_weight)
        .def_readonly("flagged", &AdequacyReport::flagged);
    m.def("raman_adequacy", &raman_adequacy, py::arg("params"));

    py::class_<AmplitudeState>(m, "AmplitudeState")
        .def(py::init<>())
        .def_readwrite("t", &AmplitudeState::t)
        .def_readwrite("alpha", &AmplitudeState::alpha)
        .def_readwrite("beta", &AmplitudeState::beta)
        .def_readwrite("gamma", &AmplitudeState::gamma)
        .def_readwrite("delta", &AmplitudeState::delta)
        .def_readwrite("laser_on", &AmplitudeState::laser_on);

    py::class_<Schedule>(m, "Schedule")
        .def(py::init<>())
        .def(py::init([](std::optional<double> tbar) {
                 return Schedule{tbar};
             }),
             py::arg("tbar"))
        .def_readwrite("tbar", &Schedule::tbar);

    m.def("lambda_k", &lambda_k, py::arg("derived"));
    m.def("amplitudes_driven", &amplitudes_driven, py::arg("params"),
          py::arg("t"));
    m.def("amplitudes_stored", &amplitudes_stored, py::arg("params"),
          py::arg("at_tbar"), py::arg("t"));
    m.def("evolve_protocol", &evolve_protocol, py::arg("params"),
          py::arg("schedule"), py::arg("t"));
    m.def("p_no", &p_no, py::arg("state"));
    m.def("find_tbar", &find_tbar, py::arg("params"), py::arg("t_lo"),
          py::arg("t_hi"));

    py::class_<Grid>(m, "Grid")
        .def(py::init<>())
        .def(py::init([](double t_max, double dt) {
                 return Grid{t_max, dt};
             }),
             py::arg("t_max"), py::arg("dt"))
        .def_readwrite("t_max", &Grid::t_max)
        .def_readwrite("dt", &Grid::dt);

    m.def("generator", &generator, py::arg("params"), py::arg("laser_on"));
    m.def("integrate", &integrate, py::arg("params"), py::arg("schedule"),
          py::arg("grid"));

    py::class_<JumpRates>(m, "JumpRates")
        .def_readonly("radiated", &JumpRates::radiated)
        .def_readonly("mirror_a", &JumpRates::mirror_a)
        .def_readonly("mirror_b", &JumpRates::mirror_b)
        .def("total", &JumpRates::total);
    m.def("jump_rates", &jump_rates, py::arg("params"), py::arg("state"));
    m.def("spont_emission_bound", &spont_emission_bound, py::arg("params"),
          py::arg("state"));

    py::enum_<JumpChannel>(m, "JumpChannel")
        .value("radiated", JumpChannel::radiated)
        .value("mirror_a", JumpChannel::mirror_a)
        .value("mirror_b", JumpChannel::mirror_b);

    py::class_<TrajectoryOptions>(m, "TrajectoryOptions")
        .def(py::init<>())
        .def_readwrite("t_max", &TrajectoryOptions::t_max)
        .def_readwrite("refine_rel_tol", &TrajectoryOptions::refine_rel_tol);

    py::class_<TrajectoryRecord>(m, "TrajectoryRecord")
        .def_readonly("seed", &TrajectoryRecord::seed)
        .def_readonly("jump_time", &TrajectoryRecord::jump_time)
        .def_readonly("channel", &TrajectoryRecord::channel);

    m.def("simulate_trajectory",
          py::overload_cast<const SystemParams&, const Schedule&,
                            const TrajectoryOptions&, std::uint64_t>(
              &simulate_trajectory),
          py::arg("params"), py::arg("schedule"), py::arg("options"),
          py::arg("seed"));
    m.def("trajectory_seed", &trajectory_seed, py::arg("master_seed"),
          py::arg("index"));

    py::class_<EnsembleResult>(m, "EnsembleResult")
        .def_readonly("n", &EnsembleResult::n)
        .def_readonly("survived", &EnsembleResult::survived)
        .def_readonly("radiated", &EnsembleResult::radiated)
        .def_readonly("mirror_a", &EnsembleResult::mirror_a)
        .def_readonly("mirror_b", &EnsembleResult::mirror_b)
        .def_readonly("p_no_empirical", &EnsembleResult::p_no_empirical)
        .def_readonly("p_yes_empirical", &EnsembleResult::p_yes_empirical)
        .def_readonly("conditioned", &EnsembleResult::conditioned);
    m.def("ensemble_density", &ensemble_density, py::arg("params"),
          py::arg("schedule"), py::arg("n"), py::arg("master_seed"),
          py::arg("t"));

    m.def("rho_atoms", &rho_atoms, py::arg("state"));
    m.def("rho_cavities", &rho_cavities, py::arg("state"));
    m.def("concurrence", &concurrence, py::arg("rho"));
    m.def("concurrence_atoms", &concurrence_atoms, py::arg("state"));
    m.def("concurrence_cavities", &concurrence_cavities, py::arg("state"));

    py::class_<ChannelProbabilities>(m, "ChannelProbabilities")
        .def_readonly("t", &ChannelProbabilities::t)
        .def_readonly("p_no", &ChannelProbabilities::p_no)
        .def_readonly("p_rad", &ChannelProbabilities::p_rad)
        .def_readonly("p_abs", &ChannelProbabilities::p_abs)
        .def_readonly("eta", &ChannelProbabilities::eta)
        .def_readonly("p0", &ChannelProbabilities::p0);
    m.def("channel_probabilities", &channel_probabilities, py::arg("params"),
          py::arg("schedule"), py::arg("t"), py::arg("eta"),
          py::arg("quad_step") = 1e-3);
    m.def("channel_probability_series", &channel_probability_series,
          py::arg("params"), py::arg("schedule"), py::arg("times"),
          py::arg("eta"), py::arg("quad_step") = 1e-3);

    m.def("rho_atoms_given_no_loss", &rho_atoms_given_no_loss,
          py::arg("state"));

    py::class_<ConditionalState>(m, "ConditionalState")
        .def_readonly("weight_no", &ConditionalState::weight_no)
        .def_readonly("weight_vacuum", &ConditionalState::weight_vacuum)
        .def_readonly("rho", &ConditionalState::rho);
    m.def("conditional_state", &conditional_state, py::arg("state"),
          py::arg("probs"));
    m.def("concurrence_conditional", &concurrence_conditional,
          py::arg("state"), py::arg("probs"));

    py::class_<DetectionRecord>(m, "DetectionRecord")
        .def_readonly("trajectory", &DetectionRecord::trajectory)
        .def_readonly("clicked", &DetectionRecord::clicked);

    py::class_<RecordStatistics>(m, "RecordStatistics")
        .def_readonly("n", &RecordStatistics::n)
        .def_readonly("no_jump", &RecordStatistics::no_jump)
        .def_readonly("click", &RecordStatistics::click)
        .def_readonly("reflected_loss", &RecordStatistics::reflected_loss)
        .def_readonly("mirror_loss", &RecordStatistics::mirror_loss)
        .def_readonly("p0_empirical", &RecordStatistics::p0_empirical);

    m.def("simulate_detection_records", &simulate_detection_records,
          py::arg("params"), py::arg("schedule"), py::arg("eta"), py::arg("n"),
          py::arg("master_seed"), py::arg("options") = TrajectoryOptions{});
    m.def("tally_records", &tally_records, py::arg("records"));
    m.def("simulate_records", &simulate_records, py::arg("params"),
          py::arg("schedule"), py::arg("eta"), py::arg("n"),
          py::arg("master_seed"), py::arg("options") = TrajectoryOptions{});

    py::class_<Config>(m, "Config")
        .def_readonly("params", &Config::params)
        .def_readonly("eta", &Config::eta)
        .def_readonly("entries", &Config::entries)
        .def_readonly("path", &Config::path);
    m.def("parse_config", &parse_config, py::arg("path"));
}
