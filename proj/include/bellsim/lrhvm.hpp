#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bellsim/bell.hpp"
#include "bellsim/channels.hpp"
#include "bellsim/densmat.hpp"

namespace bellsim {

// Polarization at or below which an N-qubit pseudo-pure state admits an
// explicit local model: 1 / (1 + 2^(N-1)).
double separability_bound(int num_qubits);

struct ApplicabilityResult {
  bool applicable = false;  // epsilon <= bound (boundary included)
  double margin = 0.0;      // bound - epsilon; positive inside the region
};

ApplicabilityResult lrhvm_applicable(double epsilon, int num_qubits);

// One ensemble-prepared measurement of a correlation inequality.
struct ExperimentRecord {
  std::string state_label;
  double theta = 0.0;    // radians
  double epsilon = 0.0;
  std::vector<double> correlations;  // normalized, one per inequality term
  double value_raw = 0.0;            // sign-weighted signal before normalization
  double value_normalized = 0.0;     // raw divided by the reference line
  double qm_prediction = 0.0;        // same inequality on the pure target
  bool violated_normalized = false;
  bool violated_raw = false;
  bool applicable = false;           // local-model region flag for this epsilon
  double applicability_margin = 0.0;
};

struct SweepResult {
  std::vector<ExperimentRecord> records;
  std::optional<double> threshold_epsilon;  // where |raw| crosses the bound
};

// Configuration of a bulk run: pseudo-pure preparation of `target` at
// `epsilon`, optional relaxation between preparation and measurement, and
// the analyzer angle grid (radians).
struct EnsembleRun {
  PureState target = zero_state(1);
  std::string state_label;
  double epsilon = 0.0;
  std::optional<RelaxationParams> relaxation;
  std::vector<double> theta_grid;
};

// Pseudo-pure preparation plus the normalization unit: the largest spectral
// line of the |0...0> reference pushed through the same relaxation stage.
struct PreparedEnsemble {
  DensityMatrix state;
  double scale = 0.0;
};

PreparedEnsemble prepare_ensemble(const PureState& target, double epsilon,
                                  const std::optional<RelaxationParams>& relaxation);

// Run the two-observer, two-setting inequality over the angle grid through
// the full pipeline: prepare, (relax), rotate, crush, read populations,
// normalize against the identically processed |00> reference.
SweepResult bulk_chsh_curve(const EnsembleRun& run, int threads = 1);

// Sweep polarization at a fixed analyzer angle; the threshold is where the
// raw value crosses the classical bound (linear interpolation on |raw|).
SweepResult polarization_sweep(const PureState& target, const std::vector<double>& eps_grid,
                               double theta_star, int threads = 1);

// Same sweep against an arbitrary inequality; the CHSH version above is a
// thin wrapper. `theta` is recorded on each record for bookkeeping only.
SweepResult polarization_sweep_with_spec(const PureState& target,
                                         const std::vector<double>& eps_grid,
                                         const InequalitySpec& spec, double theta,
                                         const std::string& state_label, int threads = 1);

}  // namespace bellsim
