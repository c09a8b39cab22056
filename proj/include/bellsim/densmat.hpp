#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace bellsim {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

// Register-size cap for dense storage (4096x4096 at the default).
int max_qubits();
void set_max_qubits(int n);

// Tolerances for state validity. Hermiticity and trace are representation
// checks; the eigenvalue floor absorbs eigensolver roundoff.
inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kEigenvalueFloor = -1e-10;

const ComplexMatrix& pauli_x();
const ComplexMatrix& pauli_y();
const ComplexMatrix& pauli_z();
ComplexMatrix identity(Eigen::Index dim);

// Normalized state vector over N qubits. Qubit 0 is the leftmost tensor
// factor: basis label b_1 b_2 ... b_N maps to row index sum b_i 2^(N-i).
class PureState {
 public:
  PureState(int num_qubits, ComplexVector amplitudes);

  int num_qubits() const { return num_qubits_; }
  Eigen::Index dim() const { return amplitudes_.size(); }
  const ComplexVector& amplitudes() const { return amplitudes_; }

  static PureState basis(int num_qubits, std::size_t index);

 private:
  int num_qubits_;
  ComplexVector amplitudes_;
};

// Named two-qubit (and N-qubit where it generalizes) preparation targets.
PureState zero_state(int num_qubits);
PureState uniform_state(int num_qubits);
PureState cat_state(int num_qubits = 2);
PureState singlet_state();

// Dense 2^N x 2^N state. Construction checks shape only; physical validity
// (Hermiticity, unit trace, positivity) is queried through validate(), so
// near-valid matrices such as tomography reconstructions stay representable.
class DensityMatrix {
 public:
  DensityMatrix(int num_qubits, ComplexMatrix matrix);
  explicit DensityMatrix(ComplexMatrix matrix);

  int num_qubits() const { return num_qubits_; }
  Eigen::Index dim() const { return matrix_.rows(); }
  const ComplexMatrix& matrix() const { return matrix_; }

 private:
  int num_qubits_;
  ComplexMatrix matrix_;
};

struct ValidityReport {
  double hermiticity_residue = 0.0;  // max |rho_ij - conj(rho_ji)|
  double trace_deviation = 0.0;      // |Tr(rho) - 1|
  double min_eigenvalue = 0.0;       // of the Hermitian part
  bool hermitian = false;
  bool unit_trace = false;
  bool positive_semidefinite = false;

  bool pass() const { return hermitian && unit_trace && positive_semidefinite; }
};

DensityMatrix pure_to_density(const PureState& psi);

// Kronecker product; the left factor is the more significant one.
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);

// Tr(rho * obs) for a Hermitian observable. The imaginary residue of the
// trace must stay below 1e-10 and is discarded.
double expectation(const DensityMatrix& rho, const ComplexMatrix& obs);

// Reduced state over the kept qubits (0-based indices).
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep);

ValidityReport validate(const ComplexMatrix& rho);
ValidityReport validate(const DensityMatrix& rho);

double purity(const DensityMatrix& rho);

// Bit of `qubit` in basis row `index` of an n-qubit register.
inline int qubit_bit(std::size_t index, int qubit, int n) {
  return static_cast<int>((index >> (n - 1 - qubit)) & 1u);
}

std::string basis_label(std::size_t index, int num_qubits);

}  // namespace bellsim
