#pragma once

#include <vector>

#include "bellsim/densmat.hpp"

namespace bellsim {

// Pseudo-pure state: identity background plus a small pure excess,
// rho = (1 - eps)/2^N * I + eps * |psi><psi|.
struct PseudoPureState {
  double epsilon = 0.0;
  PureState target;
  DensityMatrix rho;
};

PseudoPureState make_pps(const PureState& target, double epsilon);

// High-temperature equilibrium of N spins: diagonal with populations
// (1 + sum_i w_i (1 - 2 b_i)) / 2^N where w_i = beta * frequency_i / 2.
// The weights must stay in the linearized regime |w_i| < 0.1.
struct ThermalConfig {
  double beta = 0.0;
  std::vector<double> frequencies;  // one per qubit

  int num_qubits() const { return static_cast<int>(frequencies.size()); }
  double weight(int qubit) const { return 0.5 * beta * frequencies[static_cast<std::size_t>(qubit)]; }
};

DensityMatrix thermal_state(const ThermalConfig& config);

// Two-qubit cat-state preparation written as the experiment runs it: start
// from the |00> pseudo-pure state, crush residual coherences, then apply
// R_y(pi/2) on qubit 0 followed by CNOT(0 -> 1).
PseudoPureState prep_sequence_cat(double epsilon);

// Traceless part of a state: rho - Tr(rho)/2^N * I.
ComplexMatrix deviation_part(const ComplexMatrix& rho);

// Relative distance between deviation parts,
// ||dev(exp) - dev(ideal)||_F / ||dev(ideal)||_F.
double fidelity_delta(const ComplexMatrix& rho_exp, const ComplexMatrix& rho_ideal);
double fidelity_delta(const DensityMatrix& rho_exp, const DensityMatrix& rho_ideal);

}  // namespace bellsim
