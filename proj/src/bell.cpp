#include "bellsim/bell.hpp"

#include <algorithm>
#include <numeric>
#include <bit>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "bellsim/channels.hpp"
#include "bellsim/readout.hpp"

namespace bellsim {

std::array<double, 3> MeasurementDirection::unit_vector() const {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

ComplexMatrix MeasurementDirection::dot_sigma() const {
  const std::array<double, 3> r = unit_vector();
  return r[0] * pauli_x() + r[1] * pauli_y() + r[2] * pauli_z();
}

ComplexMatrix MeasurementDirection::unitary() const { return direction_unitary(theta, phi); }

OutcomeDistribution OutcomeDistribution::from_diagonal(const DensityMatrix& rho) {
  const PopulationVector pops = extract_populations(rho);
  const double total = std::accumulate(pops.populations.begin(), pops.populations.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-10) {
    throw std::invalid_argument("outcome probabilities sum to " + std::to_string(total) +
                                ", expected 1");
  }
  return OutcomeDistribution{pops.num_qubits, pops.populations};
}

int outcome_sign_product(std::size_t index) {
  return std::popcount(index) % 2 == 0 ? 1 : -1;
}

OutcomeDistribution joint_probabilities(const DensityMatrix& rho,
                                        const std::vector<MeasurementDirection>& directions) {
  const int n = rho.num_qubits();
  if (static_cast<int>(directions.size()) != n) {
    throw std::invalid_argument("need one measurement direction per qubit");
  }
  ComplexMatrix u = directions.front().unitary();
  for (int q = 1; q < n; ++q) u = tensor(u, directions[static_cast<std::size_t>(q)].unitary());
  const DensityMatrix rotated = apply_unitary(rho, u);
  return OutcomeDistribution::from_diagonal(gradient_dephase(rotated));
}

double correlation_from_probs(const OutcomeDistribution& dist) {
  if (dist.probabilities.size() != (std::size_t{1} << dist.num_qubits)) {
    throw std::invalid_argument("outcome distribution has wrong length");
  }
  double acc = 0.0;
  for (std::size_t idx = 0; idx < dist.probabilities.size(); ++idx) {
    acc += outcome_sign_product(idx) * dist.probabilities[idx];
  }
  return acc;
}

double correlation_qm(const DensityMatrix& rho,
                      const std::vector<MeasurementDirection>& directions) {
  const int n = rho.num_qubits();
  if (static_cast<int>(directions.size()) != n) {
    throw std::invalid_argument("need one measurement direction per qubit");
  }
  ComplexMatrix obs = directions.front().dot_sigma();
  for (int q = 1; q < n; ++q) obs = tensor(obs, directions[static_cast<std::size_t>(q)].dot_sigma());
  return expectation(rho, obs);
}

void InequalitySpec::check() const {
  if (num_observers < 1 || num_observers > max_qubits()) {
    throw std::invalid_argument("observer count out of range");
  }
  if (settings_per_observer < 1) {
    throw std::invalid_argument("settings per observer must be at least 1");
  }
  if (!(classical_bound > 0.0) || !std::isfinite(classical_bound)) {
    throw std::invalid_argument("classical bound must be positive and finite");
  }
  if (coefficients.empty()) {
    throw std::invalid_argument("inequality needs at least one coefficient");
  }
  bool any_nonzero = false;
  for (const auto& [settings, c] : coefficients) {
    if (static_cast<int>(settings.size()) != num_observers) {
      throw std::invalid_argument("coefficient tuple length must equal observer count");
    }
    for (int s : settings) {
      if (s < 1 || s > settings_per_observer) {
        throw std::invalid_argument("setting index " + std::to_string(s) + " out of range");
      }
    }
    if (!std::isfinite(c)) throw std::invalid_argument("coefficients must be finite");
    if (c != 0.0) any_nonzero = true;
  }
  if (!any_nonzero) throw std::invalid_argument("all coefficients are zero");
  for (const auto& [settings, c] : coefficients) {
    for (int observer = 1; observer <= num_observers; ++observer) {
      const int s = settings[static_cast<std::size_t>(observer - 1)];
      if (directions.find({observer, s}) == directions.end()) {
        throw std::invalid_argument("missing direction for observer " + std::to_string(observer) +
                                    ", setting " + std::to_string(s));
      }
    }
  }
}

std::vector<MeasurementDirection> InequalitySpec::directions_for(
    const std::vector<int>& settings) const {
  std::vector<MeasurementDirection> dirs;
  dirs.reserve(settings.size());
  for (int observer = 1; observer <= num_observers; ++observer) {
    const auto it = directions.find({observer, settings[static_cast<std::size_t>(observer - 1)]});
    if (it == directions.end()) {
      throw std::invalid_argument("missing direction for observer " + std::to_string(observer));
    }
    dirs.push_back(it->second);
  }
  return dirs;
}

InequalityResult evaluate_inequality(const InequalitySpec& spec, const DensityMatrix& rho) {
  spec.check();
  if (rho.num_qubits() != spec.num_observers) {
    throw std::invalid_argument("state has " + std::to_string(rho.num_qubits()) +
                                " qubits, inequality expects " +
                                std::to_string(spec.num_observers));
  }
  InequalityResult result;
  result.classical_bound = spec.classical_bound;
  for (const auto& [settings, c] : spec.coefficients) {
    TermResult term;
    term.settings = settings;
    term.coefficient = c;
    term.correlation = correlation_from_probs(joint_probabilities(rho, spec.directions_for(settings)));
    term.contribution = c * term.correlation;
    result.value += term.contribution;
    result.per_term.push_back(std::move(term));
  }
  result.violated = std::abs(result.value) > spec.classical_bound + kViolationSlack;
  return result;
}

double inequality_value_qm(const InequalitySpec& spec, const DensityMatrix& rho) {
  spec.check();
  if (rho.num_qubits() != spec.num_observers) {
    throw std::invalid_argument("state has " + std::to_string(rho.num_qubits()) +
                                " qubits, inequality expects " +
                                std::to_string(spec.num_observers));
  }
  double value = 0.0;
  for (const auto& [settings, c] : spec.coefficients) {
    value += c * correlation_qm(rho, spec.directions_for(settings));
  }
  return value;
}

InequalitySpec chsh_spec(double theta) {
  if (!std::isfinite(theta)) throw std::invalid_argument("theta must be finite");
  InequalitySpec spec;
  spec.num_observers = 2;
  spec.settings_per_observer = 2;
  spec.classical_bound = 2.0;
  spec.directions[{1, 1}] = MeasurementDirection{0.0, 0.0};
  spec.directions[{1, 2}] = MeasurementDirection{4.0 * theta, 0.0};
  spec.directions[{2, 1}] = MeasurementDirection{2.0 * theta, 0.0};
  spec.directions[{2, 2}] = MeasurementDirection{6.0 * theta, 0.0};
  // E(1,1) + E(2,1) + E(2,2) - E(1,2)
  spec.coefficients[{1, 1}] = 1.0;
  spec.coefficients[{2, 1}] = 1.0;
  spec.coefficients[{2, 2}] = 1.0;
  spec.coefficients[{1, 2}] = -1.0;
  return spec;
}

double chsh_qm_prediction(double theta) {
  return 3.0 * std::cos(2.0 * theta) - std::cos(6.0 * theta);
}

ShotResult sample_shots(const OutcomeDistribution& dist, std::uint64_t shots, std::uint64_t seed) {
  if (shots < 1) throw std::invalid_argument("shot count must be at least 1");
  const std::size_t dim = dist.probabilities.size();
  if (dim != (std::size_t{1} << dist.num_qubits)) {
    throw std::invalid_argument("outcome distribution has wrong length");
  }
  double total = 0.0;
  for (double p : dist.probabilities) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw std::invalid_argument("probabilities must be nonnegative and finite");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw std::invalid_argument("outcome distribution must sum to 1, got " + std::to_string(total));
  }

  std::vector<double> cumulative(dim);
  double acc = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    acc += dist.probabilities[i] / total;
    cumulative[i] = acc;
  }
  cumulative.back() = 1.0;  // absorb roundoff so every draw lands somewhere

  // Uniform doubles built directly from the top 53 bits of the generator
  // keep the stream identical across platforms and standard libraries.
  std::mt19937_64 rng(seed);
  ShotResult result;
  result.counts.assign(dim, 0);
  std::int64_t sign_sum = 0;
  for (std::uint64_t s = 0; s < shots; ++s) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    std::size_t idx = 0;
    while (idx + 1 < dim && u >= cumulative[idx]) ++idx;
    ++result.counts[idx];
    sign_sum += outcome_sign_product(idx);
  }
  const double n = static_cast<double>(shots);
  result.e_estimate = static_cast<double>(sign_sum) / n;
  if (shots > 1) {
    const double variance =
        std::max(0.0, (n - n * result.e_estimate * result.e_estimate) / (n - 1.0));
    result.std_error = std::sqrt(variance / n);
  }
  return result;
}

}  // namespace bellsim
