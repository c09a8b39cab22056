#include "bellsim/densmat.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bellsim {

namespace {

int g_max_qubits = 12;

Eigen::Index checked_dim(int num_qubits) {
  if (num_qubits < 1 || num_qubits > max_qubits()) {
    throw std::invalid_argument("qubit count " + std::to_string(num_qubits) +
                                " outside [1, " + std::to_string(max_qubits()) + "]");
  }
  return Eigen::Index{1} << num_qubits;
}

int infer_qubits(Eigen::Index dim) {
  int n = 0;
  Eigen::Index d = 1;
  while (d < dim && n <= max_qubits()) {
    d <<= 1;
    ++n;
  }
  if (d != dim || n < 1 || n > max_qubits()) {
    throw std::invalid_argument("matrix dimension " + std::to_string(dim) +
                                " is not 2^N for N in [1, " + std::to_string(max_qubits()) + "]");
  }
  return n;
}

void check_finite(const ComplexMatrix& m, const char* what) {
  if (!m.allFinite()) {
    throw std::invalid_argument(std::string(what) + " contains non-finite entries");
  }
}

}  // namespace

int max_qubits() { return g_max_qubits; }

void set_max_qubits(int n) {
  if (n < 1) throw std::invalid_argument("max qubit cap must be at least 1");
  g_max_qubits = n;
}

const ComplexMatrix& pauli_x() {
  static const ComplexMatrix m = [] {
    ComplexMatrix x(2, 2);
    x << 0, 1, 1, 0;
    return x;
  }();
  return m;
}

const ComplexMatrix& pauli_y() {
  static const ComplexMatrix m = [] {
    ComplexMatrix y(2, 2);
    y << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
    return y;
  }();
  return m;
}

const ComplexMatrix& pauli_z() {
  static const ComplexMatrix m = [] {
    ComplexMatrix z(2, 2);
    z << 1, 0, 0, -1;
    return z;
  }();
  return m;
}

ComplexMatrix identity(Eigen::Index dim) { return ComplexMatrix::Identity(dim, dim); }

PureState::PureState(int num_qubits, ComplexVector amplitudes)
    : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {
  const Eigen::Index dim = checked_dim(num_qubits);
  if (amplitudes_.size() != dim) {
    throw std::invalid_argument("amplitude vector has size " + std::to_string(amplitudes_.size()) +
                                ", expected " + std::to_string(dim));
  }
  if (!amplitudes_.allFinite()) {
    throw std::invalid_argument("state vector contains non-finite entries");
  }
  if (std::abs(amplitudes_.norm() - 1.0) > 1e-12) {
    throw std::invalid_argument("state vector is not normalized");
  }
}

PureState PureState::basis(int num_qubits, std::size_t index) {
  const Eigen::Index dim = checked_dim(num_qubits);
  if (index >= static_cast<std::size_t>(dim)) {
    throw std::invalid_argument("basis index " + std::to_string(index) + " out of range");
  }
  ComplexVector amps = ComplexVector::Zero(dim);
  amps(static_cast<Eigen::Index>(index)) = 1.0;
  return PureState(num_qubits, std::move(amps));
}

PureState zero_state(int num_qubits) { return PureState::basis(num_qubits, 0); }

PureState uniform_state(int num_qubits) {
  const Eigen::Index dim = checked_dim(num_qubits);
  ComplexVector amps = ComplexVector::Constant(dim, 1.0 / std::sqrt(static_cast<double>(dim)));
  return PureState(num_qubits, std::move(amps));
}

PureState cat_state(int num_qubits) {
  const Eigen::Index dim = checked_dim(num_qubits);
  ComplexVector amps = ComplexVector::Zero(dim);
  const double r = 1.0 / std::sqrt(2.0);
  amps(0) = r;
  amps(dim - 1) = r;
  return PureState(num_qubits, std::move(amps));
}

PureState singlet_state() {
  ComplexVector amps = ComplexVector::Zero(4);
  const double r = 1.0 / std::sqrt(2.0);
  amps(1) = r;   // |01>
  amps(2) = -r;  // |10>
  return PureState(2, std::move(amps));
}

DensityMatrix::DensityMatrix(int num_qubits, ComplexMatrix matrix)
    : num_qubits_(num_qubits), matrix_(std::move(matrix)) {
  const Eigen::Index dim = checked_dim(num_qubits);
  if (matrix_.rows() != dim || matrix_.cols() != dim) {
    throw std::invalid_argument("density matrix must be " + std::to_string(dim) + "x" +
                                std::to_string(dim) + ", got " + std::to_string(matrix_.rows()) +
                                "x" + std::to_string(matrix_.cols()));
  }
  check_finite(matrix_, "density matrix");
}

DensityMatrix::DensityMatrix(ComplexMatrix matrix)
    : DensityMatrix(
          [&matrix] {
            if (matrix.rows() != matrix.cols()) {
              throw std::invalid_argument("density matrix must be square");
            }
            return infer_qubits(matrix.rows());
          }(),
          std::move(matrix)) {}

DensityMatrix pure_to_density(const PureState& psi) {
  const ComplexVector& a = psi.amplitudes();
  return DensityMatrix(psi.num_qubits(), a * a.adjoint());
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

double expectation(const DensityMatrix& rho, const ComplexMatrix& obs) {
  if (obs.rows() != rho.dim() || obs.cols() != rho.dim()) {
    throw std::invalid_argument("observable dimension does not match state");
  }
  check_finite(obs, "observable");
  const double herm = (obs - obs.adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-10) {
    throw std::invalid_argument("observable is not Hermitian (residue " + std::to_string(herm) + ")");
  }
  // Tr(rho*obs) without forming the product matrix.
  const Complex tr = (rho.matrix().transpose().cwiseProduct(obs)).sum();
  if (std::abs(tr.imag()) >= 1e-10) {
    throw std::invalid_argument("expectation trace has imaginary residue " +
                                std::to_string(tr.imag()));
  }
  return tr.real();
}

namespace {

// Spread the bits of `value` (most significant first) over the given qubit
// positions of an n-qubit basis index.
std::size_t scatter_bits(std::size_t value, const std::vector<int>& positions, int n) {
  std::size_t index = 0;
  const int k = static_cast<int>(positions.size());
  for (int i = 0; i < k; ++i) {
    const std::size_t bit = (value >> (k - 1 - i)) & 1u;
    index |= bit << (n - 1 - positions[i]);
  }
  return index;
}

}  // namespace

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
  const int n = rho.num_qubits();
  if (keep.empty()) throw std::invalid_argument("kept qubit set must be nonempty");
  std::vector<int> kept = keep;
  std::sort(kept.begin(), kept.end());
  if (std::adjacent_find(kept.begin(), kept.end()) != kept.end()) {
    throw std::invalid_argument("kept qubit set has duplicates");
  }
  if (kept.front() < 0 || kept.back() >= n) {
    throw std::invalid_argument("kept qubit index out of range");
  }

  std::vector<int> traced;
  for (int q = 0; q < n; ++q) {
    if (!std::binary_search(kept.begin(), kept.end(), q)) traced.push_back(q);
  }
  if (traced.empty()) return rho;

  const int k = static_cast<int>(kept.size());
  const std::size_t dim_keep = std::size_t{1} << k;
  const std::size_t dim_traced = std::size_t{1} << traced.size();
  ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(dim_keep),
                                          static_cast<Eigen::Index>(dim_keep));
  const ComplexMatrix& m = rho.matrix();
  for (std::size_t i = 0; i < dim_keep; ++i) {
    const std::size_t row_kept = scatter_bits(i, kept, n);
    for (std::size_t j = 0; j < dim_keep; ++j) {
      const std::size_t col_kept = scatter_bits(j, kept, n);
      Complex acc = 0.0;
      for (std::size_t t = 0; t < dim_traced; ++t) {
        const std::size_t shared = scatter_bits(t, traced, n);
        acc += m(static_cast<Eigen::Index>(row_kept | shared),
                 static_cast<Eigen::Index>(col_kept | shared));
      }
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = acc;
    }
  }
  return DensityMatrix(k, std::move(out));
}

ValidityReport validate(const ComplexMatrix& rho) {
  if (rho.rows() != rho.cols()) {
    throw std::invalid_argument("validity check requires a square matrix");
  }
  check_finite(rho, "matrix");
  ValidityReport report;
  report.hermiticity_residue = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  report.trace_deviation = std::abs(rho.trace() - Complex(1.0, 0.0));
  const ComplexMatrix herm_part = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(herm_part, Eigen::EigenvaluesOnly);
  report.min_eigenvalue = solver.eigenvalues().minCoeff();
  report.hermitian = report.hermiticity_residue < kHermitianTol;
  report.unit_trace = report.trace_deviation < kTraceTol;
  report.positive_semidefinite = report.min_eigenvalue >= kEigenvalueFloor;
  return report;
}

ValidityReport validate(const DensityMatrix& rho) { return validate(rho.matrix()); }

double purity(const DensityMatrix& rho) {
  const Complex tr = (rho.matrix() * rho.matrix()).trace();
  return tr.real();
}

std::string basis_label(std::size_t index, int num_qubits) {
  std::string label(static_cast<std::size_t>(num_qubits), '0');
  for (int q = 0; q < num_qubits; ++q) {
    if (qubit_bit(index, q, num_qubits)) label[static_cast<std::size_t>(q)] = '1';
  }
  return label;
}

}  // namespace bellsim
