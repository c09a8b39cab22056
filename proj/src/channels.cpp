#include "bellsim/channels.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace bellsim {

namespace {

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument(std::string(what) + " must lie in [0, 1], got " +
                                std::to_string(p));
  }
}

}  // namespace

ComplexMatrix rotation_matrix(Axis axis, double angle) {
  if (!std::isfinite(angle)) throw std::invalid_argument("rotation angle must be finite");
  const double c = std::cos(angle / 2.0);
  const double s = std::sin(angle / 2.0);
  ComplexMatrix r(2, 2);
  switch (axis) {
    case Axis::X:
      r << Complex(c, 0), Complex(0, -s), Complex(0, -s), Complex(c, 0);
      break;
    case Axis::Y:
      r << Complex(c, 0), Complex(-s, 0), Complex(s, 0), Complex(c, 0);
      break;
    case Axis::Z:
      r << Complex(c, -s), Complex(0, 0), Complex(0, 0), Complex(c, s);
      break;
  }
  return r;
}

ComplexMatrix rotation_matrix(const Rotation& rotation) {
  return rotation_matrix(rotation.axis, rotation.angle);
}

ComplexMatrix direction_unitary(double theta, double phi) {
  return rotation_matrix(Axis::Y, -theta) * rotation_matrix(Axis::Z, -phi);
}

ComplexMatrix embed_single(const ComplexMatrix& gate, int qubit, int num_qubits) {
  if (gate.rows() != 2 || gate.cols() != 2) {
    throw std::invalid_argument("embedded gate must be 2x2");
  }
  if (num_qubits < 1 || num_qubits > max_qubits()) {
    throw std::invalid_argument("qubit count out of range");
  }
  if (qubit < 0 || qubit >= num_qubits) {
    throw std::invalid_argument("qubit index " + std::to_string(qubit) + " out of range");
  }
  ComplexMatrix out = qubit == 0 ? gate : identity(Eigen::Index{1} << qubit);
  if (qubit != 0) out = tensor(out, gate);
  const int rest = num_qubits - qubit - 1;
  if (rest > 0) out = tensor(out, identity(Eigen::Index{1} << rest));
  return out;
}

ComplexMatrix cnot(int control, int target, int num_qubits) {
  if (num_qubits < 2 || num_qubits > max_qubits()) {
    throw std::invalid_argument("controlled gate needs at least two qubits");
  }
  if (control < 0 || control >= num_qubits || target < 0 || target >= num_qubits ||
      control == target) {
    throw std::invalid_argument("invalid control/target qubits");
  }
  const Eigen::Index dim = Eigen::Index{1} << num_qubits;
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  for (std::size_t row = 0; row < static_cast<std::size_t>(dim); ++row) {
    std::size_t col = row;
    if (qubit_bit(row, control, num_qubits)) {
      col = row ^ (std::size_t{1} << (num_qubits - 1 - target));
    }
    out(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = 1.0;
  }
  return out;
}

DensityMatrix apply_unitary(const DensityMatrix& rho, const ComplexMatrix& u) {
  if (u.rows() != rho.dim() || u.cols() != rho.dim()) {
    throw std::invalid_argument("unitary dimension does not match state");
  }
  return DensityMatrix(rho.num_qubits(), u * rho.matrix() * u.adjoint());
}

KrausChannel::KrausChannel(std::vector<ComplexMatrix> elements) : elements_(std::move(elements)) {
  if (elements_.empty()) throw std::invalid_argument("channel needs at least one Kraus element");
  const Eigen::Index d = elements_.front().rows();
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (const ComplexMatrix& e : elements_) {
    if (e.rows() != d || e.cols() != d) {
      throw std::invalid_argument("Kraus elements must be square with a common dimension");
    }
    if (!e.allFinite()) throw std::invalid_argument("Kraus element contains non-finite entries");
    sum += e.adjoint() * e;
  }
  const double residue = (sum - bellsim::identity(d)).cwiseAbs().maxCoeff();
  if (residue > 1e-10) {
    throw std::invalid_argument("Kraus elements violate completeness (residue " +
                                std::to_string(residue) + ")");
  }
}

KrausChannel KrausChannel::identity(Eigen::Index dim) {
  return KrausChannel({bellsim::identity(dim)});
}

DensityMatrix apply_channel(const DensityMatrix& rho, const KrausChannel& channel) {
  if (channel.dim() != rho.dim()) {
    throw std::invalid_argument("channel dimension does not match state");
  }
  ComplexMatrix out = ComplexMatrix::Zero(rho.dim(), rho.dim());
  for (const ComplexMatrix& e : channel.elements()) {
    out += e * rho.matrix() * e.adjoint();
  }
  return DensityMatrix(rho.num_qubits(), std::move(out));
}

DensityMatrix apply_channel_on_qubit(const DensityMatrix& rho, const KrausChannel& channel,
                                     int qubit) {
  if (channel.dim() != 2) {
    throw std::invalid_argument("per-qubit application expects a single-qubit channel");
  }
  ComplexMatrix out = ComplexMatrix::Zero(rho.dim(), rho.dim());
  for (const ComplexMatrix& e : channel.elements()) {
    const ComplexMatrix lifted = embed_single(e, qubit, rho.num_qubits());
    out += lifted * rho.matrix() * lifted.adjoint();
  }
  return DensityMatrix(rho.num_qubits(), std::move(out));
}

KrausChannel amplitude_damping(double p) {
  check_probability(p, "damping probability");
  ComplexMatrix e0(2, 2), e1(2, 2);
  e0 << 1, 0, 0, std::sqrt(1.0 - p);
  e1 << 0, std::sqrt(p), 0, 0;
  return KrausChannel({e0, e1});
}

KrausChannel phase_damping(double lambda) {
  check_probability(lambda, "dephasing probability");
  ComplexMatrix f0(2, 2), f1(2, 2);
  f0 << 1, 0, 0, std::sqrt(1.0 - lambda);
  f1 << 0, 0, 0, std::sqrt(lambda);
  return KrausChannel({f0, f1});
}

KrausChannel relaxation_channel(double t1, double t2, double duration) {
  if (!(t1 > 0.0) || !(t2 > 0.0)) {
    throw std::invalid_argument("relaxation times must be positive");
  }
  if (!(duration >= 0.0) || !std::isfinite(duration)) {
    throw std::invalid_argument("relaxation duration must be nonnegative and finite");
  }
  if (t2 > 2.0 * t1 + 1e-15) {
    throw std::invalid_argument("T2 must not exceed 2*T1");
  }
  const double p = 1.0 - std::exp(-duration / t1);
  // Residual dephasing on top of the T1 contribution: amplitude damping alone
  // shrinks coherences by sqrt(1-p) = exp(-t/(2*T1)), so the extra factor
  // sqrt(1-lambda) = exp(-t*(1/T2 - 1/(2*T1))) makes the total exp(-t/T2).
  const double root_1m_lambda = std::exp(-duration * (1.0 / t2 - 0.5 / t1));
  const double lambda = 1.0 - root_1m_lambda * root_1m_lambda;

  const KrausChannel amp = amplitude_damping(p);
  const KrausChannel deph = phase_damping(lambda);
  std::vector<ComplexMatrix> elements;
  for (const ComplexMatrix& f : deph.elements()) {
    for (const ComplexMatrix& e : amp.elements()) {
      ComplexMatrix prod = f * e;
      if (prod.cwiseAbs().maxCoeff() > 0.0) elements.push_back(std::move(prod));
    }
  }
  return KrausChannel(std::move(elements));
}

void RelaxationParams::check(int num_qubits) const {
  if (static_cast<int>(qubits.size()) != num_qubits) {
    throw std::invalid_argument("relaxation parameters cover " + std::to_string(qubits.size()) +
                                " qubits, state has " + std::to_string(num_qubits));
  }
  if (!(duration >= 0.0) || !std::isfinite(duration)) {
    throw std::invalid_argument("relaxation duration must be nonnegative and finite");
  }
  for (const QubitRelaxation& q : qubits) {
    if (!(q.t1 > 0.0) || !(q.t2 > 0.0)) {
      throw std::invalid_argument("relaxation times must be positive");
    }
    if (q.t2 > 2.0 * q.t1 + 1e-15) {
      throw std::invalid_argument("T2 must not exceed 2*T1");
    }
  }
}

std::vector<KrausChannel> relaxation_channels(const RelaxationParams& params) {
  params.check(static_cast<int>(params.qubits.size()));
  std::vector<KrausChannel> out;
  out.reserve(params.qubits.size());
  for (const QubitRelaxation& q : params.qubits) {
    out.push_back(relaxation_channel(q.t1, q.t2, params.duration));
  }
  return out;
}

DensityMatrix apply_relaxation(const DensityMatrix& rho, const RelaxationParams& params) {
  params.check(rho.num_qubits());
  const std::vector<KrausChannel> channels = relaxation_channels(params);
  DensityMatrix out = rho;
  for (int q = 0; q < rho.num_qubits(); ++q) {
    out = apply_channel_on_qubit(out, channels[q], q);
  }
  return out;
}

}  // namespace bellsim
