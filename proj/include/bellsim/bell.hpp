#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "bellsim/densmat.hpp"

namespace bellsim {

// A value counts as violating a bound only when it clears this slack, so
// states sitting exactly on the bound are not flagged by roundoff.
inline constexpr double kViolationSlack = 1e-9;

// Measurement direction on the Bloch sphere, stored in radians.
struct MeasurementDirection {
  double theta = 0.0;  // polar angle from +z
  double phi = 0.0;    // azimuth from +x

  std::array<double, 3> unit_vector() const;
  ComplexMatrix dot_sigma() const;  // r . sigma
  ComplexMatrix unitary() const;    // maps measurement along r onto z
};

// Probabilities over the 2^N basis outcomes after a joint measurement.
struct OutcomeDistribution {
  int num_qubits = 0;
  std::vector<double> probabilities;

  static OutcomeDistribution from_diagonal(const DensityMatrix& rho);
};

// +1 for even-parity outcomes, -1 for odd: the product of per-qubit signs.
int outcome_sign_product(std::size_t index);

// Rotate each qubit into its measurement frame, crush coherences, read the
// diagonal.
OutcomeDistribution joint_probabilities(const DensityMatrix& rho,
                                        const std::vector<MeasurementDirection>& directions);

double correlation_from_probs(const OutcomeDistribution& dist);

// Same correlation through Tr(rho * (r_1.sigma x ... x r_N.sigma)); kept as
// an independent route so the two can be cross-checked.
double correlation_qm(const DensityMatrix& rho,
                      const std::vector<MeasurementDirection>& directions);

// General correlation-inequality description: N observers with M settings
// each (both 1-based in the maps), a direction per (observer, setting), and
// coefficients over setting tuples. |sum c * E| <= classical_bound.
struct InequalitySpec {
  int num_observers = 0;
  int settings_per_observer = 0;
  double classical_bound = 0.0;
  std::map<std::pair<int, int>, MeasurementDirection> directions;
  std::map<std::vector<int>, double> coefficients;

  void check() const;
  std::vector<MeasurementDirection> directions_for(const std::vector<int>& settings) const;
};

struct TermResult {
  std::vector<int> settings;
  double coefficient = 0.0;
  double correlation = 0.0;
  double contribution = 0.0;
};

struct InequalityResult {
  double value = 0.0;
  double classical_bound = 0.0;
  bool violated = false;
  std::vector<TermResult> per_term;
};

InequalityResult evaluate_inequality(const InequalitySpec& spec, const DensityMatrix& rho);

// Trace-route evaluation of the same sum, for cross-checking.
double inequality_value_qm(const InequalitySpec& spec, const DensityMatrix& rho);

// Two-observer, two-setting inequality with analyzer directions in the xz
// plane at polar angles {0, 4*theta} and {2*theta, 6*theta}.
InequalitySpec chsh_spec(double theta);

// Closed-form value of that inequality for the two-qubit cat state:
// 3*cos(2*theta) - cos(6*theta).
double chsh_qm_prediction(double theta);

// Finite-shot sampling of the product statistic with a fixed seed.
struct ShotResult {
  std::vector<std::uint64_t> counts;  // per outcome index
  double e_estimate = 0.0;
  double std_error = 0.0;
};

ShotResult sample_shots(const OutcomeDistribution& dist, std::uint64_t shots, std::uint64_t seed);

}  // namespace bellsim
