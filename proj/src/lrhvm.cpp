#include "bellsim/lrhvm.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "bellsim/pps.hpp"
#include "bellsim/readout.hpp"

namespace bellsim {

PreparedEnsemble prepare_ensemble(const PureState& target, double epsilon,
                                  const std::optional<RelaxationParams>& relaxation) {
  if (relaxation) relaxation->check(target.num_qubits());
  DensityMatrix state = make_pps(target, epsilon).rho;
  DensityMatrix reference = make_pps(zero_state(target.num_qubits()), epsilon).rho;
  if (relaxation) {
    state = apply_relaxation(state, *relaxation);
    reference = apply_relaxation(reference, *relaxation);
  }
  return PreparedEnsemble{std::move(state), reference_scale(reference)};
}

namespace {

ExperimentRecord run_point(const InequalitySpec& spec, const PreparedEnsemble& prep,
                           const DensityMatrix& pure_target, const std::string& label,
                           double theta, double epsilon, int num_qubits) {
  const InequalityResult raw = evaluate_inequality(spec, prep.state);
  ExperimentRecord record;
  record.state_label = label;
  record.theta = theta;
  record.epsilon = epsilon;
  record.value_raw = raw.value;
  record.value_normalized = raw.value / prep.scale;
  record.correlations.reserve(raw.per_term.size());
  for (const TermResult& term : raw.per_term) {
    record.correlations.push_back(term.correlation / prep.scale);
  }
  record.qm_prediction = inequality_value_qm(spec, pure_target);
  record.violated_raw = std::abs(record.value_raw) > spec.classical_bound + kViolationSlack;
  record.violated_normalized =
      std::abs(record.value_normalized) > spec.classical_bound + kViolationSlack;
  const ApplicabilityResult app = lrhvm_applicable(epsilon, num_qubits);
  record.applicable = app.applicable;
  record.applicability_margin = app.margin;
  return record;
}

// Index-sharded worker pool; records land in preallocated slots, so the
// output order never depends on scheduling.
void run_parallel(std::size_t count, int threads, const std::function<void(std::size_t)>& work) {
  if (threads < 1) throw std::invalid_argument("thread count must be at least 1");
  if (threads == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) work(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  const std::size_t workers = std::min(static_cast<std::size_t>(threads), count);
  pool.reserve(workers);
  for (std::size_t t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) work(i);
    });
  }
  for (std::thread& t : pool) t.join();
}

}  // namespace

double separability_bound(int num_qubits) {
  if (num_qubits < 1 || num_qubits > max_qubits()) {
    throw std::invalid_argument("qubit count out of range");
  }
  return 1.0 / (1.0 + std::pow(2.0, num_qubits - 1));
}

ApplicabilityResult lrhvm_applicable(double epsilon, int num_qubits) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw std::invalid_argument("polarization must lie in [0, 1]");
  }
  const double bound = separability_bound(num_qubits);
  return ApplicabilityResult{epsilon <= bound, bound - epsilon};
}

SweepResult bulk_chsh_curve(const EnsembleRun& run, int threads) {
  if (run.target.num_qubits() != 2) {
    throw std::invalid_argument("the two-observer inequality needs a two-qubit target");
  }
  if (!(run.epsilon >= 0.0 && run.epsilon <= 1.0)) {
    throw std::invalid_argument("polarization must lie in [0, 1]");
  }
  if (run.theta_grid.empty()) throw std::invalid_argument("angle grid is empty");
  for (double theta : run.theta_grid) {
    if (!(theta >= 0.0 && theta <= std::numbers::pi / 2.0 + 1e-12)) {
      throw std::invalid_argument("analyzer angle must lie in [0, pi/2]");
    }
  }
  if (run.relaxation) run.relaxation->check(2);

  const PreparedEnsemble prep = prepare_ensemble(run.target, run.epsilon, run.relaxation);
  const DensityMatrix pure_target = pure_to_density(run.target);

  SweepResult result;
  result.records.resize(run.theta_grid.size());
  run_parallel(run.theta_grid.size(), threads, [&](std::size_t i) {
    const double theta = run.theta_grid[i];
    result.records[i] = run_point(chsh_spec(theta), prep, pure_target, run.state_label, theta,
                                  run.epsilon, 2);
  });
  return result;
}

SweepResult polarization_sweep_with_spec(const PureState& target,
                                         const std::vector<double>& eps_grid,
                                         const InequalitySpec& spec, double theta,
                                         const std::string& state_label, int threads) {
  spec.check();
  if (target.num_qubits() != spec.num_observers) {
    throw std::invalid_argument("target qubit count does not match the inequality");
  }
  if (eps_grid.empty()) throw std::invalid_argument("polarization grid is empty");
  for (double eps : eps_grid) {
    if (!(eps > 0.0 && eps <= 1.0)) {
      throw std::invalid_argument("polarization grid values must lie in (0, 1]");
    }
  }

  const DensityMatrix pure_target = pure_to_density(target);
  SweepResult result;
  result.records.resize(eps_grid.size());
  run_parallel(eps_grid.size(), threads, [&](std::size_t i) {
    const PreparedEnsemble prep = prepare_ensemble(target, eps_grid[i], std::nullopt);
    result.records[i] = run_point(spec, prep, pure_target, state_label, theta, eps_grid[i],
                                  target.num_qubits());
  });

  // Linear interpolation of |raw| across the first bracketing pair. The raw
  // value is exactly linear in the polarization, so this is exact up to
  // roundoff.
  const double bound = spec.classical_bound;
  for (std::size_t i = 0; i < result.records.size(); ++i) {
    const double hi = std::abs(result.records[i].value_raw);
    if (hi == bound) {
      result.threshold_epsilon = result.records[i].epsilon;
      break;
    }
    if (i == 0) continue;
    const double lo = std::abs(result.records[i - 1].value_raw);
    if ((lo - bound) * (hi - bound) < 0.0) {
      const double t = (bound - lo) / (hi - lo);
      result.threshold_epsilon =
          result.records[i - 1].epsilon +
          t * (result.records[i].epsilon - result.records[i - 1].epsilon);
      break;
    }
  }
  return result;
}

SweepResult polarization_sweep(const PureState& target, const std::vector<double>& eps_grid,
                               double theta_star, int threads) {
  return polarization_sweep_with_spec(target, eps_grid, chsh_spec(theta_star), theta_star,
                                      "custom", threads);
}

}  // namespace bellsim
