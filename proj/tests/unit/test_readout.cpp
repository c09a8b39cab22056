#include <doctest.h>

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "bellsim/densmat.hpp"
#include "bellsim/pps.hpp"
#include "bellsim/readout.hpp"
#include "support.hpp"

using namespace bellsim;
using namespace bellsim::test;

TEST_CASE("gradient_dephase keeps the diagonal and kills every coherence") {
  auto rng = test_rng(307);
  const DensityMatrix rho = random_density(rng, 2, 3);
  const DensityMatrix crushed = gradient_dephase(rho);
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      if (r == c) {
        CHECK(crushed.matrix()(r, c) == rho.matrix()(r, c));
      } else {
        CHECK(crushed.matrix()(r, c) == Complex(0, 0));
      }
    }
  }
  // Idempotent.
  CHECK(max_abs_diff(gradient_dephase(crushed).matrix(), crushed.matrix()) == 0.0);
}

TEST_CASE("extract_populations reads the diagonal and labels rows") {
  ThermalConfig config;
  config.beta = 1e-3;
  config.frequencies = {100.0, 100.0};
  const PopulationVector pops = extract_populations(thermal_state(config));
  REQUIRE(pops.populations.size() == 4);
  CHECK(pops.populations[0] == doctest::Approx(0.275).epsilon(1e-14));
  CHECK(pops.populations[3] == doctest::Approx(0.225).epsilon(1e-14));
  CHECK(pops.labels() == std::vector<std::string>{"00", "01", "10", "11"});
}

TEST_CASE("extract_populations clips tiny negatives and rejects real ones") {
  ComplexMatrix m = identity(2);
  m(0, 0) = Complex(1.0 + 5e-13, 0.0);
  m(1, 1) = Complex(-5e-13, 0.0);
  const PopulationVector pops = extract_populations(DensityMatrix(1, m));
  CHECK(pops.populations[1] == 0.0);

  m(1, 1) = Complex(-1e-6, 0.0);
  CHECK_THROWS_AS(extract_populations(DensityMatrix(1, m)), std::invalid_argument);

  m(1, 1) = Complex(0.0, 1e-6);
  CHECK_THROWS_AS(extract_populations(DensityMatrix(1, m)), std::invalid_argument);
}

TEST_CASE("spectral amplitudes are population differences across one spin") {
  // Thermal example: populations (0.275, 0.25, 0.25, 0.225) resolve into two
  // lines of 0.025 on each spin.
  ThermalConfig config;
  config.beta = 1e-3;
  config.frequencies = {100.0, 100.0};
  const PopulationVector pops = extract_populations(thermal_state(config));

  for (int spin : {0, 1}) {
    const SpectrumModel spectrum = spectral_amplitudes(pops, spin);
    CHECK(spectrum.spin == spin);
    REQUIRE(spectrum.line_amplitudes.size() == 2);
    CHECK(spectrum.line_amplitudes[0] == doctest::Approx(0.025).epsilon(1e-12));
    CHECK(spectrum.line_amplitudes[1] == doctest::Approx(0.025).epsilon(1e-12));
    CHECK(spectrum.partner_labels == std::vector<std::string>{"0", "1"});
  }

  CHECK_THROWS_AS(spectral_amplitudes(pops, 2), std::invalid_argument);
  CHECK_THROWS_AS(spectral_amplitudes(pops, -1), std::invalid_argument);
}

TEST_CASE("spectral amplitudes on three qubits spread over partner configs") {
  // |101> populated alone. Spin 1 carries bit 0 (up), so its line at partner
  // config (b0, b2) = (1, 1) reads +1; every other partner slot is empty.
  const DensityMatrix rho = pure_to_density(PureState::basis(3, 5));
  const SpectrumModel spectrum = spectral_amplitudes(extract_populations(rho), 1);
  REQUIRE(spectrum.line_amplitudes.size() == 4);
  CHECK(spectrum.line_amplitudes[3] == doctest::Approx(1.0));
  CHECK(spectrum.line_amplitudes[0] == 0.0);
  CHECK(spectrum.line_amplitudes[1] == 0.0);
  CHECK(spectrum.line_amplitudes[2] == 0.0);
  CHECK(spectrum.partner_labels == std::vector<std::string>{"00", "01", "10", "11"});

  // Spin 0 carries bit 1 (down): its line at partner config (b1, b2) = (0, 1)
  // reads -1, exercising the negative sign of the difference.
  const SpectrumModel spin0 = spectral_amplitudes(extract_populations(rho), 0);
  CHECK(spin0.line_amplitudes[1] == doctest::Approx(-1.0));
  CHECK(spin0.line_amplitudes[0] == 0.0);
  CHECK(spin0.line_amplitudes[2] == 0.0);
  CHECK(spin0.line_amplitudes[3] == 0.0);
}

TEST_CASE("peak amplitude and reference normalization") {
  SpectrumModel signal;
  signal.spin = 0;
  signal.line_amplitudes = {0.02, -0.06};
  signal.partner_labels = {"0", "1"};

  SpectrumModel reference = signal;
  reference.line_amplitudes = {0.1, -0.05};

  CHECK(peak_amplitude(reference) == doctest::Approx(0.1));
  const SpectrumModel normalized = normalize_by_reference(signal, reference);
  CHECK(normalized.line_amplitudes[0] == doctest::Approx(0.2));
  CHECK(normalized.line_amplitudes[1] == doctest::Approx(-0.6));

  reference.line_amplitudes = {0.0, 0.0};
  CHECK_THROWS_AS(normalize_by_reference(signal, reference), std::invalid_argument);
}

TEST_CASE("reference_scale of the |00> pseudo-pure state is its polarization") {
  for (double eps : {1e-6, 0.05, 0.5, 1.0}) {
    const DensityMatrix rho = make_pps(zero_state(2), eps).rho;
    CHECK(reference_scale(rho) == doctest::Approx(eps).epsilon(1e-12));
  }
  const DensityMatrix mixed(2, ComplexMatrix(identity(4) / 4.0));
  CHECK_THROWS_AS(reference_scale(mixed), std::invalid_argument);
}

TEST_CASE("tomography settings enumerate all 3^N axis assignments in order") {
  const std::vector<TomographySetting> plan1 = tomography_settings(1);
  REQUIRE(plan1.size() == 3);
  CHECK(plan1[0].label() == "X");
  CHECK(plan1[1].label() == "Y");
  CHECK(plan1[2].label() == "Z");

  const std::vector<TomographySetting> plan2 = tomography_settings(2);
  REQUIRE(plan2.size() == 9);
  CHECK(plan2.front().label() == "XX");
  CHECK(plan2[1].label() == "XY");
  CHECK(plan2[2].label() == "XZ");
  CHECK(plan2[3].label() == "YX");
  CHECK(plan2.back().label() == "ZZ");

  CHECK(tomography_settings(3).size() == 27);
  CHECK_THROWS_AS(tomography_settings(0), std::invalid_argument);
}

TEST_CASE("axis unitaries rotate the measured axis onto z") {
  for (Axis axis : {Axis::X, Axis::Y, Axis::Z}) {
    const ComplexMatrix u = axis_unitary(axis);
    const ComplexMatrix mapped = u.adjoint() * pauli_z() * u;
    const ComplexMatrix& target =
        axis == Axis::X ? pauli_x() : (axis == Axis::Y ? pauli_y() : pauli_z());
    CHECK(max_abs_diff(mapped, target) < 1e-14);
  }
}

TEST_CASE("setting unitary is the tensor of per-qubit axis rotations") {
  TomographySetting setting;
  setting.axes = {Axis::X, Axis::Z, Axis::Y};
  const ComplexMatrix expected =
      naive_kron(naive_kron(axis_unitary(Axis::X), axis_unitary(Axis::Z)), axis_unitary(Axis::Y));
  CHECK(max_abs_diff(setting_unitary(setting), expected) < 1e-15);
}

TEST_CASE("pauli_string_matrix builds tensor products with qubit 0 leftmost") {
  CHECK(max_abs_diff(pauli_string_matrix("XZ"), naive_kron(pauli_x(), pauli_z())) == 0.0);
  CHECK(max_abs_diff(pauli_string_matrix("IY"), naive_kron(identity(2), pauli_y())) == 0.0);
  CHECK(max_abs_diff(pauli_string_matrix("ZIX"),
                     naive_kron(naive_kron(pauli_z(), identity(2)), pauli_x())) == 0.0);
  CHECK_THROWS_AS(pauli_string_matrix("XQ"), std::invalid_argument);
  CHECK_THROWS_AS(pauli_string_matrix(""), std::invalid_argument);
}

TEST_CASE("trace-route Pauli expectations match hand-computed cat values") {
  const std::map<std::string, double> exps = pauli_expectations(pure_to_density(cat_state()));
  REQUIRE(exps.size() == 16);
  CHECK(exps.at("II") == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(exps.at("XX") == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(exps.at("YY") == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(exps.at("ZZ") == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(exps.at("XI") == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(exps.at("IZ") == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("measured route equals trace route on random states") {
  auto rng = test_rng(311);
  for (int n : {1, 2}) {
    for (int trial = 0; trial < 15; ++trial) {
      const DensityMatrix rho = random_density(rng, n, 3);
      const std::map<std::string, double> direct = pauli_expectations(rho);
      const std::map<std::string, double> measured = measure_pauli_expectations(rho);
      REQUIRE(direct.size() == measured.size());
      for (const auto& [key, value] : direct) {
        CHECK(std::abs(measured.at(key) - value) < 1e-10);
      }
    }
  }
  // One three-qubit spot check keeps the cost bounded.
  const DensityMatrix ghz = pure_to_density(cat_state(3));
  const std::map<std::string, double> direct = pauli_expectations(ghz);
  const std::map<std::string, double> measured = measure_pauli_expectations(ghz);
  for (const auto& [key, value] : direct) {
    CHECK(std::abs(measured.at(key) - value) < 1e-10);
  }
}

TEST_CASE("tomography reconstruction inverts forward expectations") {
  auto rng = test_rng(313);
  for (int trial = 0; trial < 20; ++trial) {
    const DensityMatrix rho = random_density(rng, 2, 4);
    const TomographyResult result = tomography_reconstruct(pauli_expectations(rho));
    CHECK((result.rho_reconstructed.matrix() - rho.matrix()).norm() < 1e-12);
    CHECK(result.validity.pass());
    CHECK(result.pauli_expectations.size() == 16);
  }
}

TEST_CASE("tomography reconstruction reports non-positivity without failing") {
  // Perturbing <ZZ> of |00> downward makes the |11> population -0.05.
  std::map<std::string, double> exps = pauli_expectations(pure_to_density(zero_state(2)));
  exps["ZZ"] = 0.8;
  const TomographyResult result = tomography_reconstruct(exps);
  CHECK(result.validity.hermitian);
  CHECK(result.validity.unit_trace);
  CHECK_FALSE(result.validity.positive_semidefinite);
  CHECK(result.validity.min_eigenvalue == doctest::Approx(-0.05).epsilon(1e-9));
}

TEST_CASE("tomography reconstruction validates its input set") {
  std::map<std::string, double> exps = pauli_expectations(pure_to_density(cat_state()));

  std::map<std::string, double> missing = exps;
  missing.erase("XY");
  CHECK_THROWS_AS(tomography_reconstruct(missing), std::invalid_argument);

  std::map<std::string, double> out_of_range = exps;
  out_of_range["XX"] = 1.5;
  CHECK_THROWS_AS(tomography_reconstruct(out_of_range), std::invalid_argument);

  std::map<std::string, double> bad_identity = exps;
  bad_identity["II"] = 0.9;
  CHECK_THROWS_AS(tomography_reconstruct(bad_identity), std::invalid_argument);

  CHECK_THROWS_AS(tomography_reconstruct({}), std::invalid_argument);
}
