#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "bellsim/bell.hpp"
#include "bellsim/channels.hpp"
#include "bellsim/densmat.hpp"
#include "bellsim/lrhvm.hpp"
#include "bellsim/pps.hpp"
#include "bellsim/readout.hpp"
#include "bellsim/serialize.hpp"

namespace py = pybind11;
using namespace bellsim;

namespace {

// map<vector<int>, double> keys are unhashable as python lists, so the
// coefficient table crosses the boundary as a dict with tuple keys.
py::dict coefficients_to_dict(const std::map<std::vector<int>, double>& coefficients) {
  py::dict out;
  for (const auto& [settings, c] : coefficients) {
    out[py::tuple(py::cast(settings))] = c;
  }
  return out;
}

std::map<std::vector<int>, double> coefficients_from_dict(const py::dict& d) {
  std::map<std::vector<int>, double> out;
  for (const auto& item : d) {
    out[item.first.cast<std::vector<int>>()] = item.second.cast<double>();
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_bellsim, m) {
  m.doc() = "Density-matrix simulator for ensemble-averaged Bell tests";
  m.attr("__version__") = "0.1.0";

  // --- states ----------------------------------------------------------
  py::class_<PureState>(m, "PureState")
      .def(py::init<int, ComplexVector>(), py::arg("num_qubits"), py::arg("amplitudes"))
      .def_property_readonly("num_qubits", &PureState::num_qubits)
      .def_property_readonly("amplitudes",
                             [](const PureState& s) { return ComplexVector(s.amplitudes()); })
      .def_static("basis", &PureState::basis, py::arg("num_qubits"), py::arg("index"))
      .def("__repr__", [](const PureState& s) {
        std::ostringstream os;
        os << "PureState(num_qubits=" << s.num_qubits() << ")";
        return os.str();
      });

  py::class_<DensityMatrix>(m, "DensityMatrix")
      .def(py::init<int, ComplexMatrix>(), py::arg("num_qubits"), py::arg("matrix"))
      .def(py::init<ComplexMatrix>(), py::arg("matrix"))
      .def_property_readonly("num_qubits", &DensityMatrix::num_qubits)
      .def_property_readonly("matrix",
                             [](const DensityMatrix& r) { return ComplexMatrix(r.matrix()); })
      .def("__repr__", [](const DensityMatrix& r) {
        std::ostringstream os;
        os << "DensityMatrix(num_qubits=" << r.num_qubits() << ")";
        return os.str();
      });

  py::class_<ValidityReport>(m, "ValidityReport")
      .def_readonly("hermiticity_residue", &ValidityReport::hermiticity_residue)
      .def_readonly("trace_deviation", &ValidityReport::trace_deviation)
      .def_readonly("min_eigenvalue", &ValidityReport::min_eigenvalue)
      .def_readonly("hermitian", &ValidityReport::hermitian)
      .def_readonly("unit_trace", &ValidityReport::unit_trace)
      .def_readonly("positive_semidefinite", &ValidityReport::positive_semidefinite)
      .def("passes", &ValidityReport::pass);

  m.def("zero_state", &zero_state, py::arg("num_qubits"));
  m.def("uniform_state", &uniform_state, py::arg("num_qubits"));
  m.def("cat_state", &cat_state, py::arg("num_qubits") = 2);
  m.def("singlet_state", &singlet_state);
  m.def("pure_to_density", &pure_to_density, py::arg("state"));
  m.def("tensor", &tensor, py::arg("a"), py::arg("b"));
  m.def("expectation", &expectation, py::arg("rho"), py::arg("observable"));
  m.def("partial_trace", &partial_trace, py::arg("rho"), py::arg("keep"));
  m.def("validate", py::overload_cast<const DensityMatrix&>(&validate), py::arg("rho"));
  m.def("purity", &purity, py::arg("rho"));
  m.def("pauli_x", [] { return ComplexMatrix(pauli_x()); });
  m.def("pauli_y", [] { return ComplexMatrix(pauli_y()); });
  m.def("pauli_z", [] { return ComplexMatrix(pauli_z()); });
  m.def("max_qubits", &max_qubits);
  m.def("set_max_qubits", &set_max_qubits, py::arg("n"));

  // --- gates and channels ----------------------------------------------
  py::enum_<Axis>(m, "Axis").value("X", Axis::X).value("Y", Axis::Y).value("Z", Axis::Z);

  py::class_<Rotation>(m, "Rotation")
      .def(py::init([](Axis axis, double angle) { return Rotation{axis, angle}; }),
           py::arg("axis"), py::arg("angle"))
      .def_readwrite("axis", &Rotation::axis)
      .def_readwrite("angle", &Rotation::angle);

  m.def("rotation_matrix",
        py::overload_cast<Axis, double>(&rotation_matrix), py::arg("axis"), py::arg("angle"));
  m.def("rotation_matrix", py::overload_cast<const Rotation&>(&rotation_matrix),
        py::arg("rotation"));
  m.def("direction_unitary", &direction_unitary, py::arg("theta"), py::arg("phi"));
  m.def("embed_single", &embed_single, py::arg("gate"), py::arg("qubit"), py::arg("num_qubits"));
  m.def("cnot", &cnot, py::arg("control"), py::arg("target"), py::arg("num_qubits"));
  m.def("apply_unitary", &apply_unitary, py::arg("rho"), py::arg("u"));

  py::class_<KrausChannel>(m, "KrausChannel")
      .def(py::init<std::vector<ComplexMatrix>>(), py::arg("elements"))
      .def_property_readonly("elements", &KrausChannel::elements)
      .def_static("identity", &KrausChannel::identity, py::arg("dim"));

  m.def("apply_channel", &apply_channel, py::arg("rho"), py::arg("channel"));
  m.def("apply_channel_on_qubit", &apply_channel_on_qubit, py::arg("rho"), py::arg("channel"),
        py::arg("qubit"));
  m.def("amplitude_damping", &amplitude_damping, py::arg("p"));
  m.def("phase_damping", &phase_damping, py::arg("lam"));
  m.def("relaxation_channel", &relaxation_channel, py::arg("t1"), py::arg("t2"),
        py::arg("duration"));

  py::class_<QubitRelaxation>(m, "QubitRelaxation")
      .def(py::init([](double t1, double t2) { return QubitRelaxation{t1, t2}; }), py::arg("t1"),
           py::arg("t2"))
      .def_readwrite("t1", &QubitRelaxation::t1)
      .def_readwrite("t2", &QubitRelaxation::t2);

  py::class_<RelaxationParams>(m, "RelaxationParams")
      .def(py::init([](std::vector<QubitRelaxation> qubits, double duration) {
             return RelaxationParams{std::move(qubits), duration};
           }),
           py::arg("qubits"), py::arg("duration"))
      .def_readwrite("qubits", &RelaxationParams::qubits)
      .def_readwrite("duration", &RelaxationParams::duration);

  m.def("relaxation_channels", &relaxation_channels, py::arg("params"));
  m.def("apply_relaxation", &apply_relaxation, py::arg("rho"), py::arg("params"));

  // --- pseudo-pure preparation ------------------------------------------
  py::class_<PseudoPureState>(m, "PseudoPureState")
      .def_readonly("epsilon", &PseudoPureState::epsilon)
      .def_readonly("target", &PseudoPureState::target)
      .def_readonly("rho", &PseudoPureState::rho);

  py::class_<ThermalConfig>(m, "ThermalConfig")
      .def(py::init([](double beta, std::vector<double> frequencies) {
             return ThermalConfig{beta, std::move(frequencies)};
           }),
           py::arg("beta"), py::arg("frequencies"))
      .def_readwrite("beta", &ThermalConfig::beta)
      .def_readwrite("frequencies", &ThermalConfig::frequencies);

  m.def("make_pps", &make_pps, py::arg("target"), py::arg("epsilon"));
  m.def("thermal_state", &thermal_state, py::arg("config"));
  m.def("prep_sequence_cat", &prep_sequence_cat, py::arg("epsilon"));
  m.def("deviation_part", &deviation_part, py::arg("rho"));
  m.def("fidelity_delta",
        py::overload_cast<const DensityMatrix&, const DensityMatrix&>(&fidelity_delta),
        py::arg("rho_exp"), py::arg("rho_ideal"));

  // --- readout -----------------------------------------------------------
  py::class_<PopulationVector>(m, "PopulationVector")
      .def_readonly("num_qubits", &PopulationVector::num_qubits)
      .def_readonly("populations", &PopulationVector::populations)
      .def("labels", &PopulationVector::labels);

  py::class_<SpectrumModel>(m, "SpectrumModel")
      .def_readonly("spin", &SpectrumModel::spin)
      .def_readonly("line_amplitudes", &SpectrumModel::line_amplitudes)
      .def_readonly("partner_labels", &SpectrumModel::partner_labels);

  py::class_<TomographySetting>(m, "TomographySetting")
      .def_readonly("axes", &TomographySetting::axes)
      .def("label", &TomographySetting::label);

  py::class_<TomographyResult>(m, "TomographyResult")
      .def_readonly("rho_reconstructed", &TomographyResult::rho_reconstructed)
      .def_readonly("pauli_expectations", &TomographyResult::pauli_expectations)
      .def_readonly("validity", &TomographyResult::validity);

  m.def("gradient_dephase", &gradient_dephase, py::arg("rho"));
  m.def("extract_populations", &extract_populations, py::arg("rho"));
  m.def("spectral_amplitudes", &spectral_amplitudes, py::arg("populations"), py::arg("spin"));
  m.def("peak_amplitude", &peak_amplitude, py::arg("spectrum"));
  m.def("normalize_by_reference", &normalize_by_reference, py::arg("signal"), py::arg("reference"));
  m.def("reference_scale", &reference_scale, py::arg("reference"));
  m.def("tomography_settings", &tomography_settings, py::arg("num_qubits"));
  m.def("axis_unitary", &axis_unitary, py::arg("axis"));
  m.def("setting_unitary", &setting_unitary, py::arg("setting"));
  m.def("pauli_string_matrix", &pauli_string_matrix, py::arg("pauli_string"));
  m.def("pauli_expectations", &pauli_expectations, py::arg("rho"));
  m.def("measure_pauli_expectations", &measure_pauli_expectations, py::arg("rho"));
  m.def("tomography_reconstruct", &tomography_reconstruct, py::arg("expectations"));

  // --- correlations and inequalities --------------------------------------
  py::class_<MeasurementDirection>(m, "MeasurementDirection")
      .def(py::init([](double theta, double phi) { return MeasurementDirection{theta, phi}; }),
           py::arg("theta"), py::arg("phi"))
      .def_readwrite("theta", &MeasurementDirection::theta)
      .def_readwrite("phi", &MeasurementDirection::phi)
      .def("unit_vector", &MeasurementDirection::unit_vector)
      .def("dot_sigma", &MeasurementDirection::dot_sigma)
      .def("unitary", &MeasurementDirection::unitary);

  py::class_<OutcomeDistribution>(m, "OutcomeDistribution")
      .def(py::init([](int num_qubits, std::vector<double> probabilities) {
             return OutcomeDistribution{num_qubits, std::move(probabilities)};
           }),
           py::arg("num_qubits"), py::arg("probabilities"))
      .def_readonly("num_qubits", &OutcomeDistribution::num_qubits)
      .def_readonly("probabilities", &OutcomeDistribution::probabilities)
      .def_static("from_diagonal", &OutcomeDistribution::from_diagonal, py::arg("rho"));

  py::class_<InequalitySpec>(m, "InequalitySpec")
      .def(py::init<>())
      .def_readwrite("num_observers", &InequalitySpec::num_observers)
      .def_readwrite("settings_per_observer", &InequalitySpec::settings_per_observer)
      .def_readwrite("classical_bound", &InequalitySpec::classical_bound)
      .def_readwrite("directions", &InequalitySpec::directions)
      .def_property(
          "coefficients",
          [](const InequalitySpec& s) { return coefficients_to_dict(s.coefficients); },
          [](InequalitySpec& s, const py::dict& d) { s.coefficients = coefficients_from_dict(d); })
      .def("check", &InequalitySpec::check)
      .def("directions_for", &InequalitySpec::directions_for, py::arg("settings"));

  py::class_<TermResult>(m, "TermResult")
      .def_readonly("settings", &TermResult::settings)
      .def_readonly("coefficient", &TermResult::coefficient)
      .def_readonly("correlation", &TermResult::correlation)
      .def_readonly("contribution", &TermResult::contribution);

  py::class_<InequalityResult>(m, "InequalityResult")
      .def_readonly("value", &InequalityResult::value)
      .def_readonly("classical_bound", &InequalityResult::classical_bound)
      .def_readonly("violated", &InequalityResult::violated)
      .def_readonly("per_term", &InequalityResult::per_term);

  py::class_<ShotResult>(m, "ShotResult")
      .def_readonly("counts", &ShotResult::counts)
      .def_readonly("e_estimate", &ShotResult::e_estimate)
      .def_readonly("std_error", &ShotResult::std_error);

  m.def("outcome_sign_product", &outcome_sign_product, py::arg("index"));
  m.def("joint_probabilities", &joint_probabilities, py::arg("rho"), py::arg("directions"));
  m.def("correlation_from_probs", &correlation_from_probs, py::arg("dist"));
  m.def("correlation_qm", &correlation_qm, py::arg("rho"), py::arg("directions"));
  m.def("evaluate_inequality", &evaluate_inequality, py::arg("spec"), py::arg("rho"));
  m.def("inequality_value_qm", &inequality_value_qm, py::arg("spec"), py::arg("rho"));
  m.def("chsh_spec", &chsh_spec, py::arg("theta"));
  m.def("chsh_qm_prediction", &chsh_qm_prediction, py::arg("theta"));
  m.def("sample_shots", &sample_shots, py::arg("dist"), py::arg("shots"), py::arg("seed"));
  m.def("inequality_spec_from_json", [](const std::string& text) {
    return inequality_spec_from_json(json::parse(text));
  });
  m.def("inequality_spec_to_json",
        [](const InequalitySpec& spec) { return inequality_spec_to_json(spec).dump(2); });

  // --- ensemble pipeline ---------------------------------------------------
  py::class_<ApplicabilityResult>(m, "ApplicabilityResult")
      .def_readonly("applicable", &ApplicabilityResult::applicable)
      .def_readonly("margin", &ApplicabilityResult::margin);

  py::class_<ExperimentRecord>(m, "ExperimentRecord")
      .def_readonly("state_label", &ExperimentRecord::state_label)
      .def_readonly("theta", &ExperimentRecord::theta)
      .def_readonly("epsilon", &ExperimentRecord::epsilon)
      .def_readonly("correlations", &ExperimentRecord::correlations)
      .def_readonly("value_raw", &ExperimentRecord::value_raw)
      .def_readonly("value_normalized", &ExperimentRecord::value_normalized)
      .def_readonly("qm_prediction", &ExperimentRecord::qm_prediction)
      .def_readonly("violated_normalized", &ExperimentRecord::violated_normalized)
      .def_readonly("violated_raw", &ExperimentRecord::violated_raw)
      .def_readonly("applicable", &ExperimentRecord::applicable)
      .def_readonly("applicability_margin", &ExperimentRecord::applicability_margin);

  py::class_<SweepResult>(m, "SweepResult")
      .def_readonly("records", &SweepResult::records)
      .def_readonly("threshold_epsilon", &SweepResult::threshold_epsilon);

  py::class_<PreparedEnsemble>(m, "PreparedEnsemble")
      .def_readonly("state", &PreparedEnsemble::state)
      .def_readonly("scale", &PreparedEnsemble::scale);

  py::class_<EnsembleRun>(m, "EnsembleRun")
      .def(py::init([](PureState target, std::string state_label, double epsilon,
                       std::optional<RelaxationParams> relaxation, std::vector<double> theta_grid) {
             return EnsembleRun{std::move(target), std::move(state_label), epsilon,
                                std::move(relaxation), std::move(theta_grid)};
           }),
           py::arg("target"), py::arg("state_label"), py::arg("epsilon"), py::arg("relaxation"),
           py::arg("theta_grid"))
      .def_readwrite("state_label", &EnsembleRun::state_label)
      .def_readwrite("epsilon", &EnsembleRun::epsilon)
      .def_readwrite("relaxation", &EnsembleRun::relaxation)
      .def_readwrite("theta_grid", &EnsembleRun::theta_grid);

  m.def("separability_bound", &separability_bound, py::arg("num_qubits"));
  m.def("lrhvm_applicable", &lrhvm_applicable, py::arg("epsilon"), py::arg("num_qubits"));
  m.def("prepare_ensemble", &prepare_ensemble, py::arg("target"), py::arg("epsilon"),
        py::arg("relaxation"));
  m.def("bulk_chsh_curve", &bulk_chsh_curve, py::arg("run"), py::arg("threads") = 1);
  m.def("polarization_sweep", &polarization_sweep, py::arg("target"), py::arg("eps_grid"),
        py::arg("theta_star"), py::arg("threads") = 1);
  m.def("polarization_sweep_with_spec", &polarization_sweep_with_spec, py::arg("target"),
        py::arg("eps_grid"), py::arg("spec"), py::arg("theta"), py::arg("state_label"),
        py::arg("threads") = 1);
}
