#include "bellsim/pps.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "bellsim/channels.hpp"
#include "bellsim/readout.hpp"

namespace bellsim {

PseudoPureState make_pps(const PureState& target, double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw std::invalid_argument("polarization must lie in [0, 1], got " + std::to_string(epsilon));
  }
  const Eigen::Index dim = target.dim();
  const double background = (1.0 - epsilon) / static_cast<double>(dim);
  ComplexMatrix rho = epsilon * (target.amplitudes() * target.amplitudes().adjoint());
  rho += background * identity(dim);
  return PseudoPureState{epsilon, target, DensityMatrix(target.num_qubits(), std::move(rho))};
}

DensityMatrix thermal_state(const ThermalConfig& config) {
  const int n = config.num_qubits();
  if (n < 1 || n > max_qubits()) {
    throw std::invalid_argument("thermal state needs 1 to " + std::to_string(max_qubits()) +
                                " frequencies");
  }
  if (!(config.beta >= 0.0) || !std::isfinite(config.beta)) {
    throw std::invalid_argument("inverse temperature must be nonnegative and finite");
  }
  for (int q = 0; q < n; ++q) {
    if (!std::isfinite(config.frequencies[static_cast<std::size_t>(q)])) {
      throw std::invalid_argument("frequencies must be finite");
    }
    if (std::abs(config.weight(q)) >= 0.1) {
      throw std::invalid_argument("weight " + std::to_string(config.weight(q)) + " for qubit " +
                                  std::to_string(q) + " leaves the linearized regime (|w| < 0.1)");
    }
  }
  const Eigen::Index dim = Eigen::Index{1} << n;
  ComplexMatrix rho = ComplexMatrix::Zero(dim, dim);
  const double norm = 1.0 / static_cast<double>(dim);
  for (std::size_t idx = 0; idx < static_cast<std::size_t>(dim); ++idx) {
    double population = 1.0;
    for (int q = 0; q < n; ++q) {
      // |0> sits below |1>, so occupying it adds the weight.
      population += config.weight(q) * (qubit_bit(idx, q, n) ? -1.0 : 1.0);
    }
    rho(static_cast<Eigen::Index>(idx), static_cast<Eigen::Index>(idx)) = norm * population;
  }
  return DensityMatrix(n, std::move(rho));
}

PseudoPureState prep_sequence_cat(double epsilon) {
  const PseudoPureState start = make_pps(zero_state(2), epsilon);
  // The crusher is a no-op on the diagonal input but belongs to the sequence:
  // it removes any coherence left over from the averaging stage.
  DensityMatrix rho = gradient_dephase(start.rho);
  rho = apply_unitary(rho, embed_single(rotation_matrix(Axis::Y, std::numbers::pi / 2.0), 0, 2));
  rho = apply_unitary(rho, cnot(0, 1, 2));
  return PseudoPureState{epsilon, cat_state(2), std::move(rho)};
}

ComplexMatrix deviation_part(const ComplexMatrix& rho) {
  if (rho.rows() != rho.cols()) throw std::invalid_argument("deviation part needs a square matrix");
  const Complex mean = rho.trace() / static_cast<double>(rho.rows());
  return rho - mean * identity(rho.rows());
}

double fidelity_delta(const ComplexMatrix& rho_exp, const ComplexMatrix& rho_ideal) {
  if (rho_exp.rows() != rho_ideal.rows() || rho_exp.cols() != rho_ideal.cols()) {
    throw std::invalid_argument("states must share a dimension");
  }
  const ComplexMatrix dev_ideal = deviation_part(rho_ideal);
  const double ideal_norm = dev_ideal.norm();
  if (ideal_norm < 1e-14) {
    throw std::invalid_argument("ideal state has no deviation part to compare against");
  }
  return (deviation_part(rho_exp) - dev_ideal).norm() / ideal_norm;
}

double fidelity_delta(const DensityMatrix& rho_exp, const DensityMatrix& rho_ideal) {
  return fidelity_delta(rho_exp.matrix(), rho_ideal.matrix());
}

}  // namespace bellsim
