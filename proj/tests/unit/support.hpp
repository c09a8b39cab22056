#pragma once

// Test-side reference implementations. Everything here recomputes results
// through deliberately plain loops (or textbook formulas) so the library's
// Eigen-based fast paths are checked against an independent route.

#include <cstdint>
#include <random>
#include <vector>

#include "bellsim/densmat.hpp"

namespace bellsim::test {

inline std::mt19937_64 test_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

// Uniform double in [-1, 1) built from the top 53 bits, bit-stable across
// platforms (std::uniform_real_distribution is not).
inline double uniform_pm1(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0;
}

inline Complex random_complex(std::mt19937_64& rng) {
  const double re = uniform_pm1(rng);
  const double im = uniform_pm1(rng);
  return Complex(re, im);
}

inline ComplexMatrix random_complex_matrix(std::mt19937_64& rng, Eigen::Index rows,
                                           Eigen::Index cols) {
  ComplexMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = random_complex(rng);
  }
  return m;
}

inline PureState random_state_vector(std::mt19937_64& rng, int num_qubits) {
  const Eigen::Index dim = Eigen::Index{1} << num_qubits;
  ComplexVector v(dim);
  double norm2 = 0.0;
  do {
    for (Eigen::Index i = 0; i < dim; ++i) v(i) = random_complex(rng);
    norm2 = v.squaredNorm();
  } while (norm2 < 1e-6);
  v /= std::sqrt(norm2);
  return PureState(num_qubits, std::move(v));
}

// Convex mixture of `rank` random pure states: Hermitian, unit trace and
// positive semidefinite by construction.
inline DensityMatrix random_density(std::mt19937_64& rng, int num_qubits, int rank) {
  const Eigen::Index dim = Eigen::Index{1} << num_qubits;
  std::vector<double> weights(static_cast<std::size_t>(rank));
  double total = 0.0;
  for (double& w : weights) {
    w = 0.05 + 0.5 * (uniform_pm1(rng) + 1.0);
    total += w;
  }
  ComplexMatrix rho = ComplexMatrix::Zero(dim, dim);
  for (int k = 0; k < rank; ++k) {
    const PureState psi = random_state_vector(rng, num_qubits);
    rho += (weights[static_cast<std::size_t>(k)] / total) *
           (psi.amplitudes() * psi.amplitudes().adjoint());
  }
  return DensityMatrix(num_qubits, std::move(rho));
}

// Kronecker product by its definition, entry by entry.
inline ComplexMatrix naive_kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index ar = 0; ar < a.rows(); ++ar) {
    for (Eigen::Index ac = 0; ac < a.cols(); ++ac) {
      for (Eigen::Index br = 0; br < b.rows(); ++br) {
        for (Eigen::Index bc = 0; bc < b.cols(); ++bc) {
          out(ar * b.rows() + br, ac * b.cols() + bc) = a(ar, ac) * b(br, bc);
        }
      }
    }
  }
  return out;
}

// Triple-loop matrix product.
inline ComplexMatrix naive_matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out = ComplexMatrix::Zero(a.rows(), b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      Complex acc(0.0, 0.0);
      for (Eigen::Index k = 0; k < a.cols(); ++k) acc += a(i, k) * b(k, j);
      out(i, j) = acc;
    }
  }
  return out;
}

inline ComplexMatrix naive_adjoint(const ComplexMatrix& a) {
  ComplexMatrix out(a.cols(), a.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) out(j, i) = std::conj(a(i, j));
  }
  return out;
}

inline ComplexMatrix naive_conjugate(const ComplexMatrix& u, const ComplexMatrix& rho) {
  return naive_matmul(naive_matmul(u, rho), naive_adjoint(u));
}

// Operator-sum map from its definition.
inline ComplexMatrix naive_channel(const ComplexMatrix& rho,
                                   const std::vector<ComplexMatrix>& elements) {
  ComplexMatrix out = ComplexMatrix::Zero(rho.rows(), rho.cols());
  for (const ComplexMatrix& e : elements) out += naive_conjugate(e, rho);
  return out;
}

inline Complex naive_trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  Complex acc(0.0, 0.0);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index k = 0; k < a.cols(); ++k) acc += a(i, k) * b(k, i);
  }
  return acc;
}

// Matrix exponential by scaling-and-squaring over a plain Taylor series;
// accurate far beyond test tolerances for the 2x2 generators used here.
inline ComplexMatrix naive_expm(const ComplexMatrix& m) {
  const double scale = m.cwiseAbs().maxCoeff();
  int squarings = 0;
  double factor = 1.0;
  while (scale * factor > 0.25) {
    factor /= 2.0;
    ++squarings;
  }
  const ComplexMatrix scaled = m * factor;
  ComplexMatrix result = bellsim::identity(m.rows());
  ComplexMatrix term = bellsim::identity(m.rows());
  for (int k = 1; k <= 24; ++k) {
    term = naive_matmul(term, scaled) / static_cast<double>(k);
    result += term;
  }
  for (int s = 0; s < squarings; ++s) result = naive_matmul(result, result);
  return result;
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace bellsim::test
