#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qteleport/io.hpp"
#include "qteleport/protocol.hpp"

namespace py = pybind11;
using namespace qteleport;

PYBIND11_MODULE(_qteleport, m) {
    m.doc() = "Cavity-decay teleportation simulator (C++ core)";
    m.attr("__version__") = kVersionString;

    py::class_<TimeGrid>(m, "TimeGrid")
        .def(py::init<double, int>(), py::arg("T"), py::arg("n_steps"))
        .def_readonly("T", &TimeGrid::T)
        .def_readonly("n_steps", &TimeGrid::n_steps)
        .def("dt", &TimeGrid::dt)
        .def("t", &TimeGrid::t)
        .def("n_samples", &TimeGrid::n_samples);

    py::class_<CgTable>(m, "CgTable")
        .def(py::init(&CgTable::defaults))
        .def_readwrite("C_Omega0", &CgTable::C_Omega0)
        .def_readwrite("C_Omega1", &CgTable::C_Omega1)
        .def_readwrite("C_Omega2", &CgTable::C_Omega2)
        .def_readwrite("C_g1", &CgTable::C_g1)
        .def_readwrite("C_g2", &CgTable::C_g2)
        .def("bob_pulse_ratio", &CgTable::bob_pulse_ratio);

    py::class_<DrivePulse>(m, "DrivePulse")
        .def_readonly("grid", &DrivePulse::grid)
        .def_readonly("envelope", &DrivePulse::envelope)
        .def_readonly("shape_name", &DrivePulse::shape_name);

    py::class_<MixingAngleTrack>(m, "MixingAngleTrack")
        .def_readonly("sin_theta", &MixingAngleTrack::sin_theta)
        .def_readonly("cos_theta", &MixingAngleTrack::cos_theta);

    py::class_<PhotonMode>(m, "PhotonMode")
        .def_readonly("samples", &PhotonMode::samples)
        .def_readonly("polarization", &PhotonMode::polarization)
        .def_readonly("normalized", &PhotonMode::normalized)
        .def_readonly("emission_probability", &PhotonMode::emission_probability);

    m.def("gaussian_pulse", &gaussian_pulse, py::arg("grid"), py::arg("t_peak"),
          py::arg("t_w"), py::arg("E_max"));
    m.def("scale_pulse", &scale_pulse);
    m.def("mixing_angle_alice", &mixing_angle_alice, py::arg("pulse"),
          py::arg("cg"), py::arg("branch"));
    m.def("mixing_angle_bob", &mixing_angle_bob);
    m.def("photon_pulse_shape", &photon_pulse_shape, py::arg("track"),
          py::arg("kappa"), py::arg("polarization") = 'L');
    m.def("normalize_mode", &normalize_mode);
    m.def("overlap", &overlap);

    py::class_<SystemParams>(m, "SystemParams")
        .def(py::init<>())
        .def_readwrite("cg", &SystemParams::cg)
        .def_readwrite("kappa", &SystemParams::kappa)
        .def_readwrite("gamma", &SystemParams::gamma)
        .def_readwrite("spatial_mode_value", &SystemParams::spatial_mode_value);

    py::enum_<ProtocolMode>(m, "ProtocolMode")
        .value("Analytic", ProtocolMode::Analytic)
        .value("Trajectory", ProtocolMode::Trajectory);

    py::class_<bsm::DetectionModel>(m, "DetectionModel")
        .def(py::init<>())
        .def_readwrite("efficiency", &bsm::DetectionModel::efficiency)
        .def_readwrite("number_resolving", &bsm::DetectionModel::number_resolving)
        .def_readwrite("arm_transmission", &bsm::DetectionModel::arm_transmission)
        .def("set_uniform_efficiency", &bsm::DetectionModel::set_uniform_efficiency);

    py::class_<TrajectoryStats>(m, "TrajectoryStats")
        .def_readonly("n_shots", &TrajectoryStats::n_shots)
        .def_readonly("n_both_emitted", &TrajectoryStats::n_both_emitted)
        .def_readonly("n_success", &TrajectoryStats::n_success)
        .def_readonly("n_plus", &TrajectoryStats::n_plus)
        .def_readonly("n_minus", &TrajectoryStats::n_minus)
        .def_readonly("n_spontaneous", &TrajectoryStats::n_spontaneous)
        .def_readonly("empirical_success", &TrajectoryStats::empirical_success)
        .def_readonly("success_error", &TrajectoryStats::success_error)
        .def_readonly("mean_fidelity", &TrajectoryStats::mean_fidelity);

    py::class_<ProtocolConfig>(m, "ProtocolConfig")
        .def(py::init<>())
        .def_readwrite("a", &ProtocolConfig::a)
        .def_readwrite("b", &ProtocolConfig::b)
        .def_readwrite("alice", &ProtocolConfig::alice)
        .def_readwrite("bob", &ProtocolConfig::bob)
        .def_readwrite("grid", &ProtocolConfig::grid)
        .def_readwrite("pulse_peak", &ProtocolConfig::pulse_peak)
        .def_readwrite("pulse_width", &ProtocolConfig::pulse_width)
        .def_readwrite("pulse_amplitude", &ProtocolConfig::pulse_amplitude)
        .def_readwrite("pulse_ratio", &ProtocolConfig::pulse_ratio)
        .def_readwrite("pulse_delay", &ProtocolConfig::pulse_delay)
        .def_readwrite("detection", &ProtocolConfig::detection)
        .def_readwrite("mode", &ProtocolConfig::mode)
        .def_readwrite("n_trajectories", &ProtocolConfig::n_trajectories)
        .def_readwrite("seed", &ProtocolConfig::seed)
        .def_readwrite("force_overlap_one", &ProtocolConfig::force_overlap_one)
        .def_readwrite("compute_adiabaticity", &ProtocolConfig::compute_adiabaticity);

    py::class_<ProtocolReport>(m, "ProtocolReport")
        .def_readonly("p_plus", &ProtocolReport::p_plus)
        .def_readonly("p_minus", &ProtocolReport::p_minus)
        .def_readonly("p_success", &ProtocolReport::p_success)
        .def_readonly("p_failure", &ProtocolReport::p_failure)
        .def_readonly("conditional_state", &ProtocolReport::conditional_state)
        .def_readonly("fidelity", &ProtocolReport::fidelity)
        .def_readonly("eq_formula_prediction", &ProtocolReport::eq_formula_prediction)
        .def_readonly("delta", &ProtocolReport::delta)
        .def_readonly("overlap_A0_B", &ProtocolReport::overlap_A0_B)
        .def_readonly("overlap_A1_B", &ProtocolReport::overlap_A1_B)
        .def_readonly("emit_prob_A0", &ProtocolReport::emit_prob_A0)
        .def_readonly("emit_prob_A1", &ProtocolReport::emit_prob_A1)
        .def_readonly("emit_prob_B", &ProtocolReport::emit_prob_B)
        .def_readonly("adiabaticity_alice", &ProtocolReport::adiabaticity_alice)
        .def_readonly("adiabaticity_bob", &ProtocolReport::adiabaticity_bob)
        .def_readonly("trajectory", &ProtocolReport::trajectory);

    m.def("run_teleportation", &run_teleportation,
          py::call_guard<py::gil_scoped_release>());
    m.def("fidelity_formula", &fidelity_formula, py::arg("a"), py::arg("b"),
          py::arg("mode_overlap"));
    m.def("bloch_grid8", &bloch_grid8);

    py::class_<AuditRow>(m, "AuditRow")
        .def_readonly("a", &AuditRow::a)
        .def_readonly("b", &AuditRow::b)
        .def_readonly("mode_overlap", &AuditRow::mode_overlap)
        .def_readonly("oracle_fidelity", &AuditRow::oracle_fidelity)
        .def_readonly("formula_fidelity", &AuditRow::formula_fidelity)
        .def_readonly("deviation", &AuditRow::deviation);
    m.def("paper_formula_audit", &paper_formula_audit);

    py::class_<Config>(m, "Config")
        .def(py::init<>())
        .def("load_file", &Config::load_file)
        .def("set", &Config::set)
        .def("get", &Config::get)
        .def("to_protocol_config", &Config::to_protocol_config);

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
}
