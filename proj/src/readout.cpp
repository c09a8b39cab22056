#include "bellsim/readout.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bellsim {

namespace {

constexpr double kDiagImagTol = 1e-10;
constexpr double kPopulationFloor = -1e-12;

double real_population(const Complex& value, std::size_t index) {
  if (std::abs(value.imag()) >= kDiagImagTol) {
    throw std::invalid_argument("diagonal entry " + std::to_string(index) +
                                " has imaginary residue " + std::to_string(value.imag()));
  }
  double p = value.real();
  if (p < 0.0) {
    if (p < kPopulationFloor) {
      throw std::invalid_argument("population " + std::to_string(index) +
                                  " is negative beyond tolerance: " + std::to_string(p));
    }
    p = 0.0;
  }
  return p;
}

char axis_letter(Axis a) {
  switch (a) {
    case Axis::X: return 'X';
    case Axis::Y: return 'Y';
    case Axis::Z: return 'Z';
  }
  return '?';
}

const ComplexMatrix& pauli_letter_matrix(char letter) {
  switch (letter) {
    case 'X': return pauli_x();
    case 'Y': return pauli_y();
    case 'Z': return pauli_z();
    case 'I': {
      static const ComplexMatrix eye = identity(2);
      return eye;
    }
    default:
      throw std::invalid_argument(std::string("unknown Pauli letter '") + letter + "'");
  }
}

// All length-n strings over IXYZ in lexicographic order (I<X<Y<Z).
void enumerate_pauli_strings(int n, std::vector<std::string>& out) {
  static const char letters[] = {'I', 'X', 'Y', 'Z'};
  out.clear();
  const std::size_t total = std::size_t{1} << (2 * n);
  out.reserve(total);
  for (std::size_t code = 0; code < total; ++code) {
    std::string s(static_cast<std::size_t>(n), 'I');
    for (int q = 0; q < n; ++q) {
      const std::size_t digit = (code >> (2 * (n - 1 - q))) & 3u;
      s[static_cast<std::size_t>(q)] = letters[digit];
    }
    out.push_back(std::move(s));
  }
}

}  // namespace

DensityMatrix gradient_dephase(const DensityMatrix& rho) {
  ComplexMatrix out = ComplexMatrix::Zero(rho.dim(), rho.dim());
  out.diagonal() = rho.matrix().diagonal();
  return DensityMatrix(rho.num_qubits(), std::move(out));
}

std::vector<std::string> PopulationVector::labels() const {
  std::vector<std::string> out;
  out.reserve(populations.size());
  for (std::size_t i = 0; i < populations.size(); ++i) {
    out.push_back(basis_label(i, num_qubits));
  }
  return out;
}

PopulationVector extract_populations(const DensityMatrix& rho) {
  PopulationVector pv;
  pv.num_qubits = rho.num_qubits();
  const auto diag = rho.matrix().diagonal();
  pv.populations.reserve(static_cast<std::size_t>(diag.size()));
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    pv.populations.push_back(real_population(diag(i), static_cast<std::size_t>(i)));
  }
  return pv;
}

SpectrumModel spectral_amplitudes(const PopulationVector& populations, int spin) {
  const int n = populations.num_qubits;
  if (spin < 0 || spin >= n) throw std::invalid_argument("spin index out of range");
  if (populations.populations.size() != (std::size_t{1} << n)) {
    throw std::invalid_argument("population vector has wrong length");
  }
  SpectrumModel model;
  model.spin = spin;
  const std::size_t lines = std::size_t{1} << (n - 1);
  model.line_amplitudes.reserve(lines);
  model.partner_labels.reserve(lines);
  const std::size_t spin_mask = std::size_t{1} << (n - 1 - spin);
  for (std::size_t partner = 0; partner < lines; ++partner) {
    // Spread the partner configuration over the non-spin bit positions.
    std::size_t base = 0;
    int src = n - 2;
    for (int q = 0; q < n; ++q) {
      if (q == spin) continue;
      const std::size_t bit = (partner >> src) & 1u;
      base |= bit << (n - 1 - q);
      --src;
    }
    const double upper = populations.populations[base];
    const double lower = populations.populations[base | spin_mask];
    model.line_amplitudes.push_back(upper - lower);
    if (n > 1) {
      std::string label;
      for (int q = 0; q < n; ++q) {
        if (q == spin) continue;
        label += (base >> (n - 1 - q)) & 1u ? '1' : '0';
      }
      model.partner_labels.push_back(label);
    } else {
      model.partner_labels.push_back("");
    }
  }
  return model;
}

double peak_amplitude(const SpectrumModel& spectrum) {
  double peak = 0.0;
  for (double a : spectrum.line_amplitudes) peak = std::max(peak, std::abs(a));
  return peak;
}

SpectrumModel normalize_by_reference(const SpectrumModel& signal, const SpectrumModel& reference) {
  const double scale = peak_amplitude(reference);
  if (scale < 1e-14) {
    throw std::invalid_argument("reference spectrum has no usable line (all amplitudes ~0)");
  }
  SpectrumModel out = signal;
  for (double& a : out.line_amplitudes) a /= scale;
  return out;
}

double reference_scale(const DensityMatrix& reference) {
  const PopulationVector pops = extract_populations(gradient_dephase(reference));
  double scale = 0.0;
  for (int spin = 0; spin < reference.num_qubits(); ++spin) {
    scale = std::max(scale, peak_amplitude(spectral_amplitudes(pops, spin)));
  }
  if (scale < 1e-14) {
    throw std::invalid_argument("reference state produces no usable spectral line");
  }
  return scale;
}

std::string TomographySetting::label() const {
  std::string s;
  s.reserve(axes.size());
  for (Axis a : axes) s += axis_letter(a);
  return s;
}

std::vector<TomographySetting> tomography_settings(int num_qubits) {
  if (num_qubits < 1 || num_qubits > max_qubits()) {
    throw std::invalid_argument("qubit count out of range");
  }
  std::vector<TomographySetting> out;
  std::size_t total = 1;
  for (int i = 0; i < num_qubits; ++i) total *= 3;
  out.reserve(total);
  static const Axis order[] = {Axis::X, Axis::Y, Axis::Z};
  for (std::size_t code = 0; code < total; ++code) {
    TomographySetting setting;
    setting.axes.resize(static_cast<std::size_t>(num_qubits));
    std::size_t c = code;
    for (int q = num_qubits - 1; q >= 0; --q) {
      setting.axes[static_cast<std::size_t>(q)] = order[c % 3];
      c /= 3;
    }
    out.push_back(std::move(setting));
  }
  return out;
}

ComplexMatrix axis_unitary(Axis axis) {
  switch (axis) {
    case Axis::X: return direction_unitary(std::numbers::pi / 2.0, 0.0);
    case Axis::Y: return direction_unitary(std::numbers::pi / 2.0, std::numbers::pi / 2.0);
    case Axis::Z: return direction_unitary(0.0, 0.0);
  }
  throw std::invalid_argument("unknown axis");
}

ComplexMatrix setting_unitary(const TomographySetting& setting) {
  if (setting.axes.empty()) throw std::invalid_argument("setting covers no qubits");
  ComplexMatrix u = axis_unitary(setting.axes.front());
  for (std::size_t q = 1; q < setting.axes.size(); ++q) {
    u = tensor(u, axis_unitary(setting.axes[q]));
  }
  return u;
}

ComplexMatrix pauli_string_matrix(const std::string& pauli_string) {
  if (pauli_string.empty()) throw std::invalid_argument("Pauli string must be nonempty");
  ComplexMatrix m = pauli_letter_matrix(pauli_string.front());
  for (std::size_t i = 1; i < pauli_string.size(); ++i) {
    m = tensor(m, pauli_letter_matrix(pauli_string[i]));
  }
  return m;
}

std::map<std::string, double> pauli_expectations(const DensityMatrix& rho) {
  std::vector<std::string> strings;
  enumerate_pauli_strings(rho.num_qubits(), strings);
  std::map<std::string, double> out;
  for (const std::string& s : strings) {
    out[s] = expectation(rho, pauli_string_matrix(s));
  }
  return out;
}

std::map<std::string, double> measure_pauli_expectations(const DensityMatrix& rho) {
  const int n = rho.num_qubits();
  std::map<std::string, double> out;
  std::string identity_string(static_cast<std::size_t>(n), 'I');
  out[identity_string] = 1.0;

  for (const TomographySetting& setting : tomography_settings(n)) {
    const DensityMatrix rotated = apply_unitary(rho, setting_unitary(setting));
    const PopulationVector pops = extract_populations(gradient_dephase(rotated));
    const std::size_t dim = pops.populations.size();
    // Each nonempty qubit subset whose complement reads Z in this setting
    // owns exactly one Pauli string; fill it from the parity-weighted sums.
    const std::size_t subsets = dim;  // 2^n
    for (std::size_t subset = 1; subset < subsets; ++subset) {
      bool canonical = true;
      std::string s(static_cast<std::size_t>(n), 'I');
      for (int q = 0; q < n; ++q) {
        const bool in_subset = (subset >> (n - 1 - q)) & 1u;
        if (in_subset) {
          s[static_cast<std::size_t>(q)] = axis_letter(setting.axes[static_cast<std::size_t>(q)]);
        } else if (setting.axes[static_cast<std::size_t>(q)] != Axis::Z) {
          canonical = false;
          break;
        }
      }
      if (!canonical) continue;
      double acc = 0.0;
      for (std::size_t idx = 0; idx < dim; ++idx) {
        const int ones = std::popcount(idx & subset);
        acc += (ones % 2 == 0 ? 1.0 : -1.0) * pops.populations[idx];
      }
      out[s] = acc;
    }
  }
  return out;
}

TomographyResult tomography_reconstruct(const std::map<std::string, double>& expectations) {
  if (expectations.empty()) throw std::invalid_argument("no expectations supplied");
  const int n = static_cast<int>(expectations.begin()->first.size());
  if (n < 1 || n > max_qubits()) {
    throw std::invalid_argument("Pauli string length out of range");
  }
  std::vector<std::string> strings;
  enumerate_pauli_strings(n, strings);
  if (expectations.size() != strings.size()) {
    throw std::invalid_argument("expected " + std::to_string(strings.size()) +
                                " Pauli expectations, got " + std::to_string(expectations.size()));
  }
  const Eigen::Index dim = Eigen::Index{1} << n;
  ComplexMatrix rho = ComplexMatrix::Zero(dim, dim);
  const double norm = 1.0 / static_cast<double>(dim);
  for (const std::string& s : strings) {
    const auto it = expectations.find(s);
    if (it == expectations.end()) {
      throw std::invalid_argument("missing expectation for Pauli string " + s);
    }
    const double value = it->second;
    if (!std::isfinite(value) || std::abs(value) > 1.0 + 1e-9) {
      throw std::invalid_argument("expectation for " + s + " outside [-1, 1]: " +
                                  std::to_string(value));
    }
    if (s.find_first_not_of('I') == std::string::npos && std::abs(value - 1.0) > 1e-9) {
      throw std::invalid_argument("identity expectation must be 1, got " + std::to_string(value));
    }
    rho += (norm * value) * pauli_string_matrix(s);
  }
  DensityMatrix state(n, std::move(rho));
  ValidityReport report = validate(state);
  return TomographyResult{std::move(state), expectations, report};
}

}  // namespace bellsim
