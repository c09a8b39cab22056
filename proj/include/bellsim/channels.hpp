#pragma once

#include <vector>

#include "bellsim/densmat.hpp"

namespace bellsim {

enum class Axis { X, Y, Z };

// A pulse about one of the lab-frame axes.
struct Rotation {
  Axis axis = Axis::Z;
  double angle = 0.0;  // radians
};

// R_a(alpha) = exp(-i * alpha * sigma_a / 2).
ComplexMatrix rotation_matrix(Axis axis, double angle);
ComplexMatrix rotation_matrix(const Rotation& rotation);

// Single-qubit unitary that maps measurement along the unit vector
// r = (sin(theta)cos(phi), sin(theta)sin(phi), cos(theta)) onto the z axis:
// U = R_y(-theta) * R_z(-phi), so that U^dag sigma_z U = r . sigma.
ComplexMatrix direction_unitary(double theta, double phi);

// Lift a 2x2 gate onto `qubit` (0-based, leftmost factor first) of an
// n-qubit register.
ComplexMatrix embed_single(const ComplexMatrix& gate, int qubit, int num_qubits);

ComplexMatrix cnot(int control, int target, int num_qubits);

DensityMatrix apply_unitary(const DensityMatrix& rho, const ComplexMatrix& u);

// Completely positive trace-preserving map in Kraus form. Construction
// enforces the completeness relation sum_k E_k^dag E_k = I to 1e-10.
class KrausChannel {
 public:
  explicit KrausChannel(std::vector<ComplexMatrix> elements);

  const std::vector<ComplexMatrix>& elements() const { return elements_; }
  Eigen::Index dim() const { return elements_.front().rows(); }

  static KrausChannel identity(Eigen::Index dim);

 private:
  std::vector<ComplexMatrix> elements_;
};

DensityMatrix apply_channel(const DensityMatrix& rho, const KrausChannel& channel);

// Apply a single-qubit channel to one qubit of a larger register.
DensityMatrix apply_channel_on_qubit(const DensityMatrix& rho, const KrausChannel& channel,
                                     int qubit);

// Decay toward |0> with probability p = 1 - exp(-t/T1).
KrausChannel amplitude_damping(double p);

// Pure dephasing: off-diagonals scaled by sqrt(1 - lambda).
KrausChannel phase_damping(double lambda);

// Longitudinal and transverse relaxation over `duration`: amplitude damping
// toward |0> composed with extra phase damping so that off-diagonal elements
// attenuate by exactly exp(-duration/T2). Requires T2 <= 2*T1.
KrausChannel relaxation_channel(double t1, double t2, double duration);

struct QubitRelaxation {
  double t1 = 0.0;
  double t2 = 0.0;
};

struct RelaxationParams {
  std::vector<QubitRelaxation> qubits;  // one entry per qubit
  double duration = 0.0;

  void check(int num_qubits) const;
};

// One relaxation channel per qubit, in qubit order.
std::vector<KrausChannel> relaxation_channels(const RelaxationParams& params);

// Per-qubit relaxation applied to every qubit of the register.
DensityMatrix apply_relaxation(const DensityMatrix& rho, const RelaxationParams& params);

}  // namespace bellsim
