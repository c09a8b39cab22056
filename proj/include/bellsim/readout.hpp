#pragma once

#include <map>
#include <string>
#include <vector>

#include "bellsim/channels.hpp"
#include "bellsim/densmat.hpp"

namespace bellsim {

// Pulsed-field-gradient crusher: keeps the diagonal, zeroes every coherence.
DensityMatrix gradient_dephase(const DensityMatrix& rho);

struct PopulationVector {
  int num_qubits = 0;
  std::vector<double> populations;  // indexed by basis row

  std::vector<std::string> labels() const;
};

// Diagonal of the state. Small negative entries (>= -1e-12) are clipped to
// zero; anything more negative is rejected.
PopulationVector extract_populations(const DensityMatrix& rho);

// Amplitudes of the 2^(N-1) resolved lines of one spin's multiplet: the
// population difference across that spin's transition for each configuration
// of the partner spins.
struct SpectrumModel {
  int spin = 0;
  std::vector<double> line_amplitudes;          // indexed by partner configuration
  std::vector<std::string> partner_labels;      // N-1 bit configuration labels
};

SpectrumModel spectral_amplitudes(const PopulationVector& populations, int spin);

// Largest line magnitude of a spectrum; used as the unit for normalization.
double peak_amplitude(const SpectrumModel& spectrum);

// Divide a signal spectrum by the reference's largest line. Rejects a
// reference whose lines are all numerically zero.
SpectrumModel normalize_by_reference(const SpectrumModel& signal, const SpectrumModel& reference);

// Largest line magnitude across all spins of a dephased reference state.
double reference_scale(const DensityMatrix& reference);

// --- state tomography -------------------------------------------------

struct TomographySetting {
  std::vector<Axis> axes;  // one measurement axis per qubit

  std::string label() const;  // e.g. "XZ"
};

// All 3^N axis assignments, ordered X, Y, Z with qubit 0 varying slowest.
std::vector<TomographySetting> tomography_settings(int num_qubits);

// Rotation that maps the given axis onto z for one qubit.
ComplexMatrix axis_unitary(Axis axis);

// Tensor product of the per-qubit axis rotations.
ComplexMatrix setting_unitary(const TomographySetting& setting);

// Tensor-product Pauli operator from a string over {I, X, Y, Z},
// leftmost letter acting on qubit 0.
ComplexMatrix pauli_string_matrix(const std::string& pauli_string);

// Expectation of every length-N Pauli string via Tr(rho * P).
std::map<std::string, double> pauli_expectations(const DensityMatrix& rho);

// The same expectations through the experiment pipeline: rotate into each
// measurement setting, crush coherences, and read sign-weighted populations.
std::map<std::string, double> measure_pauli_expectations(const DensityMatrix& rho);

struct TomographyResult {
  DensityMatrix rho_reconstructed;
  std::map<std::string, double> pauli_expectations;  // the inputs, echoed
  ValidityReport validity;  // reconstruction may be slightly non-positive
};

// Invert a complete set of 4^N Pauli expectations back into a matrix:
// rho = 2^(-N) * sum_P <P> P.
TomographyResult tomography_reconstruct(const std::map<std::string, double>& expectations);

}  // namespace bellsim
