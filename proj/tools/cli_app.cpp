#include "cli_app.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "bellsim/bell.hpp"
#include "bellsim/channels.hpp"
#include "bellsim/densmat.hpp"
#include "bellsim/lrhvm.hpp"
#include "bellsim/pps.hpp"
#include "bellsim/readout.hpp"
#include "bellsim/serialize.hpp"

namespace bellsim::cli {

namespace {

constexpr std::size_t kMaxGridPoints = 1000000;

double parse_double(const std::string& text, const std::string& what) {
  std::size_t consumed = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &consumed);
  } catch (const std::exception&) {
    throw std::invalid_argument(what + ": cannot parse '" + text + "' as a number");
  }
  if (consumed != text.size()) {
    throw std::invalid_argument(what + ": trailing characters in '" + text + "'");
  }
  return value;
}

std::vector<double> parse_double_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    out.push_back(parse_double(item, what));
  }
  if (out.empty()) throw std::invalid_argument(what + ": empty list");
  return out;
}

std::string bool_str(bool b) { return b ? "true" : "false"; }

}  // namespace

GridSpec GridSpec::parse(const std::string& text) {
  GridSpec grid;
  const std::size_t first = text.find(':');
  if (first == std::string::npos) {
    grid.start = grid.stop = parse_double(text, "grid");
    grid.step = 1.0;
    return grid;
  }
  const std::size_t second = text.find(':', first + 1);
  if (second == std::string::npos || text.find(':', second + 1) != std::string::npos) {
    throw std::invalid_argument("grid: expected start:stop:step, got '" + text + "'");
  }
  grid.start = parse_double(text.substr(0, first), "grid start");
  grid.stop = parse_double(text.substr(first + 1, second - first - 1), "grid stop");
  grid.step = parse_double(text.substr(second + 1), "grid step");
  if (!(grid.step > 0.0)) throw std::invalid_argument("grid step must be positive");
  if (grid.stop < grid.start) throw std::invalid_argument("grid stop must not precede start");
  return grid;
}

std::vector<double> GridSpec::points() const {
  const double span = (stop - start) / step;
  const std::size_t count = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
  if (count > kMaxGridPoints) {
    throw std::invalid_argument("grid has " + std::to_string(count) + " points, cap is " +
                                std::to_string(kMaxGridPoints));
  }
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(start + static_cast<double>(i) * step);
  return out;
}

std::string GridSpec::str() const {
  if (start == stop) return format_double(start);
  return format_double(start) + ":" + format_double(stop) + ":" + format_double(step);
}

bool Options::relaxation_requested() const {
  return !t1.empty() || !t2.empty() || duration >= 0.0;
}

int threads_from_env() {
  const char* raw = std::getenv("BELLSIM_THREADS");
  if (raw == nullptr || *raw == '\0') return 1;
  char* end = nullptr;
  const long value = std::strtol(raw, &end, 10);
  if (end == raw || *end != '\0' || value < 1 || value > 1024) {
    throw std::invalid_argument("BELLSIM_THREADS must be an integer in [1, 1024], got '" +
                                std::string(raw) + "'");
  }
  return static_cast<int>(value);
}

namespace {

struct NamedState {
  PureState state;
  std::string label;
};

NamedState resolve_state(const Options& options) {
  if (options.state == "cat") return {cat_state(2), "cat"};
  if (options.state == "zero") return {zero_state(2), "zero"};
  if (options.state == "uniform") return {uniform_state(2), "uniform"};
  if (options.state == "singlet") return {singlet_state(), "singlet"};
  if (options.state == "custom") {
    if (options.amplitudes_file.empty()) {
      throw std::invalid_argument("state 'custom' needs --amplitudes FILE");
    }
    std::ifstream in(options.amplitudes_file);
    if (!in) {
      throw std::invalid_argument("cannot open amplitudes file " + options.amplitudes_file);
    }
    json doc;
    try {
      in >> doc;
    } catch (const json::parse_error& e) {
      throw std::invalid_argument("amplitudes file is not valid JSON: " + std::string(e.what()));
    }
    if (!doc.is_array() || doc.empty()) {
      throw std::invalid_argument("amplitudes document must be a nonempty array of [re, im]");
    }
    ComplexVector amps(static_cast<Eigen::Index>(doc.size()));
    for (std::size_t i = 0; i < doc.size(); ++i) {
      const json& cell = doc[i];
      if (!cell.is_array() || cell.size() != 2 || !cell[0].is_number() || !cell[1].is_number()) {
        throw std::invalid_argument("amplitude entries must be [re, im] pairs");
      }
      amps(static_cast<Eigen::Index>(i)) = Complex(cell[0].get<double>(), cell[1].get<double>());
    }
    int n = 0;
    Eigen::Index d = 1;
    while (d < amps.size()) {
      d <<= 1;
      ++n;
    }
    if (d != amps.size() || n < 1) {
      throw std::invalid_argument("amplitude count must be a power of two >= 2");
    }
    return {PureState(n, std::move(amps)), "custom"};
  }
  throw std::invalid_argument("unknown state '" + options.state +
                              "' (expected cat, zero, uniform, singlet, or custom)");
}

std::optional<RelaxationParams> resolve_relaxation(const Options& options, int num_qubits) {
  if (!options.relaxation_requested()) return std::nullopt;
  if (options.t1.empty() || options.t2.empty() || options.duration < 0.0) {
    throw std::invalid_argument("relaxation needs --t1, --t2 and --duration together");
  }
  RelaxationParams params;
  const std::vector<double> t1 = parse_double_list(options.t1, "--t1");
  const std::vector<double> t2 = parse_double_list(options.t2, "--t2");
  if (t1.size() != static_cast<std::size_t>(num_qubits) || t1.size() != t2.size()) {
    throw std::invalid_argument("--t1/--t2 need one value per qubit (" +
                                std::to_string(num_qubits) + ")");
  }
  params.duration = options.duration;
  for (std::size_t q = 0; q < t1.size(); ++q) {
    params.qubits.push_back(QubitRelaxation{t1[q], t2[q]});
  }
  params.check(num_qubits);
  return params;
}

// --- output assembly ---------------------------------------------------

using Echo = std::vector<std::pair<std::string, std::string>>;

void echo_relaxation(const Options& options, Echo& echo) {
  if (options.relaxation_requested()) {
    echo.emplace_back("t1", options.t1);
    echo.emplace_back("t2", options.t2);
    echo.emplace_back("duration", format_double(options.duration));
  } else {
    echo.emplace_back("relaxation", "none");
  }
}

json echo_to_json(const Echo& echo) {
  json j = json::object();
  for (const auto& [key, value] : echo) j[key] = value;
  return j;
}

std::string csv_document(const Echo& echo, const std::vector<std::string>& columns,
                         const std::vector<std::vector<std::string>>& rows,
                         const Echo& footer) {
  std::string out;
  for (const auto& [key, value] : echo) {
    out += "# " + key + " = " + value + "\n";
  }
  for (std::size_t c = 0; c < columns.size(); ++c) {
    out += columns[c];
    out += (c + 1 < columns.size()) ? "," : "\n";
  }
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      out += row[c];
      out += (c + 1 < row.size()) ? "," : "\n";
    }
  }
  for (const auto& [key, value] : footer) {
    out += "# " + key + " = " + value + "\n";
  }
  return out;
}

std::string json_document(json j) { return j.dump(2) + "\n"; }

json validity_to_json(const ValidityReport& report) {
  json j;
  j["hermiticity_residue"] = report.hermiticity_residue;
  j["trace_deviation"] = report.trace_deviation;
  j["min_eigenvalue"] = report.min_eigenvalue;
  j["hermitian"] = report.hermitian;
  j["unit_trace"] = report.unit_trace;
  j["positive_semidefinite"] = report.positive_semidefinite;
  return j;
}

// --- commands ----------------------------------------------------------

std::string run_chsh_sweep(const Options& options) {
  const NamedState target = resolve_state(options);
  if (target.state.num_qubits() != 2) {
    throw std::invalid_argument("chsh-sweep needs a two-qubit state");
  }
  const GridSpec grid = GridSpec::parse(options.theta);
  const std::vector<double> degrees = grid.points();
  std::vector<double> radians;
  radians.reserve(degrees.size());
  for (double d : degrees) radians.push_back(deg_to_rad(d));

  const std::optional<RelaxationParams> relaxation = resolve_relaxation(options, 2);
  EnsembleRun run{target.state, target.label, options.epsilon, relaxation, radians};
  const SweepResult sweep = bulk_chsh_curve(run, options.threads);

  // Finite-shot estimates sample each term's outcome distribution with a
  // seed derived from the point and term index, so reruns are reproducible.
  std::vector<double> estimates, std_errors;
  if (options.shots > 0) {
    const PreparedEnsemble prep = prepare_ensemble(target.state, options.epsilon, relaxation);
    estimates.reserve(radians.size());
    std_errors.reserve(radians.size());
    for (std::size_t i = 0; i < radians.size(); ++i) {
      const InequalitySpec spec = chsh_spec(radians[i]);
      double estimate = 0.0;
      double variance = 0.0;
      std::uint64_t term = 0;
      for (const auto& [settings, c] : spec.coefficients) {
        const OutcomeDistribution dist =
            joint_probabilities(prep.state, spec.directions_for(settings));
        const std::uint64_t term_seed =
            options.seed + static_cast<std::uint64_t>(i) * spec.coefficients.size() + term;
        const ShotResult shot = sample_shots(dist, options.shots, term_seed);
        estimate += c * shot.e_estimate;
        variance += c * c * shot.std_error * shot.std_error;
        ++term;
      }
      estimates.push_back(estimate / prep.scale);
      std_errors.push_back(std::sqrt(variance) / prep.scale);
    }
  }

  Echo echo;
  echo.emplace_back("command", "chsh-sweep");
  echo.emplace_back("state", target.label);
  echo.emplace_back("epsilon", format_double(options.epsilon));
  echo.emplace_back("theta_deg", grid.str());
  echo_relaxation(options, echo);
  echo.emplace_back("shots", std::to_string(options.shots));
  echo.emplace_back("seed", std::to_string(options.seed));

  if (options.format == "json") {
    json j;
    j["command"] = "chsh-sweep";
    j["config"] = echo_to_json(echo);
    json records = json::array();
    for (std::size_t i = 0; i < sweep.records.size(); ++i) {
      const ExperimentRecord& r = sweep.records[i];
      json rec;
      rec["theta_deg"] = degrees[i];
      rec["chsh_normalized"] = r.value_normalized;
      rec["chsh_raw"] = r.value_raw;
      rec["qm_prediction"] = r.qm_prediction;
      rec["violated"] = r.violated_normalized;
      if (options.shots > 0) {
        rec["chsh_estimate"] = estimates[i];
        rec["chsh_std_error"] = std_errors[i];
      }
      records.push_back(std::move(rec));
    }
    j["records"] = std::move(records);
    return json_document(std::move(j));
  }

  std::vector<std::string> columns = {"theta_deg", "chsh_normalized", "chsh_raw", "qm_prediction",
                                      "violated"};
  if (options.shots > 0) {
    columns.push_back("chsh_estimate");
    columns.push_back("chsh_std_error");
  }
  std::vector<std::vector<std::string>> rows;
  rows.reserve(sweep.records.size());
  for (std::size_t i = 0; i < sweep.records.size(); ++i) {
    const ExperimentRecord& r = sweep.records[i];
    std::vector<std::string> row = {format_double(degrees[i]), format_double(r.value_normalized),
                                    format_double(r.value_raw), format_double(r.qm_prediction),
                                    bool_str(r.violated_normalized)};
    if (options.shots > 0) {
      row.push_back(format_double(estimates[i]));
      row.push_back(format_double(std_errors[i]));
    }
    rows.push_back(std::move(row));
  }
  return csv_document(echo, columns, rows, {});
}

std::string run_bell_eval(const Options& options) {
  const bool has_file = !options.spec_file.empty();
  const bool has_theta = options.chsh_theta_deg < 1e299;
  if (has_file == has_theta) {
    throw std::invalid_argument("bell-eval needs exactly one of --spec or --chsh-theta");
  }
  InequalitySpec spec;
  if (has_file) {
    std::ifstream in(options.spec_file);
    if (!in) throw std::invalid_argument("cannot open inequality file " + options.spec_file);
    json doc;
    try {
      in >> doc;
    } catch (const json::parse_error& e) {
      throw std::invalid_argument("inequality file is not valid JSON: " + std::string(e.what()));
    }
    spec = inequality_spec_from_json(doc);
  } else {
    spec = chsh_spec(deg_to_rad(options.chsh_theta_deg));
  }

  const NamedState target = resolve_state(options);
  if (target.state.num_qubits() != spec.num_observers) {
    throw std::invalid_argument("state has " + std::to_string(target.state.num_qubits()) +
                                " qubits, inequality expects " +
                                std::to_string(spec.num_observers));
  }
  DensityMatrix rho = make_pps(target.state, options.epsilon).rho;
  const std::optional<RelaxationParams> relaxation =
      resolve_relaxation(options, target.state.num_qubits());
  if (relaxation) rho = apply_relaxation(rho, *relaxation);

  const InequalityResult result = evaluate_inequality(spec, rho);

  Echo echo;
  echo.emplace_back("command", "bell-eval");
  if (has_file) {
    echo.emplace_back("spec", options.spec_file);
  } else {
    echo.emplace_back("chsh_theta_deg", format_double(options.chsh_theta_deg));
  }
  echo.emplace_back("state", target.label);
  echo.emplace_back("epsilon", format_double(options.epsilon));
  echo_relaxation(options, echo);

  if (options.format == "json") {
    json j;
    j["command"] = "bell-eval";
    j["config"] = echo_to_json(echo);
    j["value"] = result.value;
    j["classical_bound"] = result.classical_bound;
    j["violated"] = result.violated;
    json terms = json::array();
    for (const TermResult& term : result.per_term) {
      json t;
      t["settings"] = term.settings;
      t["coefficient"] = term.coefficient;
      t["correlation"] = term.correlation;
      t["contribution"] = term.contribution;
      terms.push_back(std::move(t));
    }
    j["terms"] = std::move(terms);
    return json_document(std::move(j));
  }

  std::vector<std::string> columns;
  for (int o = 1; o <= spec.num_observers; ++o) {
    columns.push_back("setting_" + std::to_string(o));
  }
  columns.insert(columns.end(), {"coefficient", "correlation", "contribution"});
  std::vector<std::vector<std::string>> rows;
  for (const TermResult& term : result.per_term) {
    std::vector<std::string> row;
    for (int s : term.settings) row.push_back(std::to_string(s));
    row.push_back(format_double(term.coefficient));
    row.push_back(format_double(term.correlation));
    row.push_back(format_double(term.contribution));
    rows.push_back(std::move(row));
  }
  Echo footer;
  footer.emplace_back("value", format_double(result.value));
  footer.emplace_back("classical_bound", format_double(result.classical_bound));
  footer.emplace_back("violated", bool_str(result.violated));
  return csv_document(echo, columns, rows, footer);
}

std::string run_pps_prep(const Options& options) {
  const NamedState target = resolve_state(options);
  // The cat target runs through the pulse-sequence construction; everything
  // else is prepared directly from the definition.
  PseudoPureState pps = (target.label == "cat") ? prep_sequence_cat(options.epsilon)
                                                : make_pps(target.state, options.epsilon);
  DensityMatrix rho = pps.rho;
  const std::optional<RelaxationParams> relaxation =
      resolve_relaxation(options, target.state.num_qubits());
  if (relaxation) rho = apply_relaxation(rho, *relaxation);

  const DensityMatrix ideal = make_pps(target.state, options.epsilon).rho;
  const double delta = fidelity_delta(rho, ideal);
  const ValidityReport validity = validate(rho);

  Echo echo;
  echo.emplace_back("command", "pps-prep");
  echo.emplace_back("state", target.label);
  echo.emplace_back("epsilon", format_double(options.epsilon));
  echo_relaxation(options, echo);

  if (options.format == "json") {
    json j;
    j["command"] = "pps-prep";
    j["config"] = echo_to_json(echo);
    j["state"] = density_to_json(rho);
    j["delta_vs_ideal"] = delta;
    j["validity"] = validity_to_json(validity);
    return json_document(std::move(j));
  }

  std::vector<std::vector<std::string>> rows;
  const ComplexMatrix& m = rho.matrix();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      rows.push_back({std::to_string(i), std::to_string(c), format_double(m(i, c).real()),
                      format_double(m(i, c).imag())});
    }
  }
  Echo footer;
  footer.emplace_back("delta_vs_ideal", format_double(delta));
  return csv_document(echo, {"row", "col", "re", "im"}, rows, footer);
}

std::string run_tomography(const Options& options) {
  const NamedState target = resolve_state(options);
  DensityMatrix rho = make_pps(target.state, options.epsilon).rho;
  const std::optional<RelaxationParams> relaxation =
      resolve_relaxation(options, target.state.num_qubits());
  if (relaxation) rho = apply_relaxation(rho, *relaxation);

  const std::vector<TomographySetting> settings = tomography_settings(rho.num_qubits());
  const std::map<std::string, double> measured = measure_pauli_expectations(rho);
  const TomographyResult recon = tomography_reconstruct(measured);
  const double roundtrip_error = (recon.rho_reconstructed.matrix() - rho.matrix()).cwiseAbs().maxCoeff();

  Echo echo;
  echo.emplace_back("command", "tomography");
  echo.emplace_back("state", target.label);
  echo.emplace_back("epsilon", format_double(options.epsilon));
  echo_relaxation(options, echo);
  std::string plan;
  for (std::size_t i = 0; i < settings.size(); ++i) {
    plan += settings[i].label();
    if (i + 1 < settings.size()) plan += ";";
  }

  if (options.format == "json") {
    json j;
    j["command"] = "tomography";
    j["config"] = echo_to_json(echo);
    json setting_list = json::array();
    for (const TomographySetting& s : settings) setting_list.push_back(s.label());
    j["settings"] = std::move(setting_list);
    json expectations = json::object();
    for (const auto& [pauli, value] : measured) expectations[pauli] = value;
    j["expectations"] = std::move(expectations);
    j["reconstruction"] = density_to_json(recon.rho_reconstructed);
    j["validity"] = validity_to_json(recon.validity);
    j["max_abs_error_vs_input"] = roundtrip_error;
    return json_document(std::move(j));
  }

  Echo header = echo;
  header.emplace_back("settings", plan);
  std::vector<std::vector<std::string>> rows;
  for (const auto& [pauli, value] : measured) {
    rows.push_back({pauli, format_double(value)});
  }
  Echo footer;
  footer.emplace_back("max_abs_error_vs_input", format_double(roundtrip_error));
  return csv_document(header, {"pauli", "expectation"}, rows, footer);
}

std::string run_polarization_sweep(const Options& options) {
  const NamedState target = resolve_state(options);
  if (target.state.num_qubits() != 2) {
    throw std::invalid_argument("polarization-sweep needs a two-qubit state");
  }
  const GridSpec grid = GridSpec::parse(options.eps_grid);
  const std::vector<double> eps = grid.points();
  const double theta_star = deg_to_rad(options.theta_star_deg);
  const SweepResult sweep = polarization_sweep_with_spec(target.state, eps, chsh_spec(theta_star),
                                                         theta_star, target.label, options.threads);

  Echo echo;
  echo.emplace_back("command", "polarization-sweep");
  echo.emplace_back("state", target.label);
  echo.emplace_back("eps_grid", grid.str());
  echo.emplace_back("theta_star_deg", format_double(options.theta_star_deg));

  if (options.format == "json") {
    json j;
    j["command"] = "polarization-sweep";
    j["config"] = echo_to_json(echo);
    json records = json::array();
    for (const ExperimentRecord& r : sweep.records) {
      json rec;
      rec["epsilon"] = r.epsilon;
      rec["chsh_raw"] = r.value_raw;
      rec["chsh_normalized"] = r.value_normalized;
      rec["violated_raw"] = r.violated_raw;
      rec["lrhvm_applicable"] = r.applicable;
      rec["lrhvm_margin"] = r.applicability_margin;
      records.push_back(std::move(rec));
    }
    j["records"] = std::move(records);
    if (sweep.threshold_epsilon) {
      j["threshold_epsilon"] = *sweep.threshold_epsilon;
    } else {
      j["threshold_epsilon"] = nullptr;
    }
    return json_document(std::move(j));
  }

  std::vector<std::vector<std::string>> rows;
  for (const ExperimentRecord& r : sweep.records) {
    rows.push_back({format_double(r.epsilon), format_double(r.value_raw),
                    format_double(r.value_normalized), bool_str(r.violated_raw),
                    bool_str(r.applicable), format_double(r.applicability_margin)});
  }
  Echo footer;
  footer.emplace_back("threshold_epsilon",
                      sweep.threshold_epsilon ? format_double(*sweep.threshold_epsilon) : "none");
  return csv_document(echo,
                      {"epsilon", "chsh_raw", "chsh_normalized", "violated_raw",
                       "lrhvm_applicable", "lrhvm_margin"},
                      rows, footer);
}

std::string run_lrhvm_compare(const Options& options) {
  const NamedState target = resolve_state(options);
  if (target.state.num_qubits() != 2) {
    throw std::invalid_argument("lrhvm-compare needs a two-qubit state");
  }
  const GridSpec grid = GridSpec::parse(options.theta);
  const std::vector<double> degrees = grid.points();
  std::vector<double> radians;
  radians.reserve(degrees.size());
  for (double d : degrees) radians.push_back(deg_to_rad(d));

  EnsembleRun base{target.state, target.label, options.epsilon, std::nullopt, radians};
  const SweepResult ideal = bulk_chsh_curve(base, options.threads);

  const std::optional<RelaxationParams> relaxation = resolve_relaxation(options, 2);
  std::optional<SweepResult> relaxed;
  if (relaxation) {
    EnsembleRun damped = base;
    damped.relaxation = relaxation;
    relaxed = bulk_chsh_curve(damped, options.threads);
  }

  double max_abs_diff = 0.0;
  double max_abs_diff_relaxed = 0.0;
  for (std::size_t i = 0; i < ideal.records.size(); ++i) {
    const double diff = std::abs(ideal.records[i].value_normalized - ideal.records[i].qm_prediction);
    max_abs_diff = std::max(max_abs_diff, diff);
    if (relaxed) {
      const double rdiff =
          std::abs(relaxed->records[i].value_normalized - relaxed->records[i].qm_prediction);
      max_abs_diff_relaxed = std::max(max_abs_diff_relaxed, rdiff);
    }
  }

  Echo echo;
  echo.emplace_back("command", "lrhvm-compare");
  echo.emplace_back("state", target.label);
  echo.emplace_back("epsilon", format_double(options.epsilon));
  echo.emplace_back("theta_deg", grid.str());
  echo_relaxation(options, echo);

  if (options.format == "json") {
    json j;
    j["command"] = "lrhvm-compare";
    j["config"] = echo_to_json(echo);
    json records = json::array();
    for (std::size_t i = 0; i < ideal.records.size(); ++i) {
      const ExperimentRecord& r = ideal.records[i];
      json rec;
      rec["theta_deg"] = degrees[i];
      rec["qm_pure"] = r.qm_prediction;
      rec["bulk_normalized"] = r.value_normalized;
      rec["abs_diff"] = std::abs(r.value_normalized - r.qm_prediction);
      if (relaxed) {
        const ExperimentRecord& rr = relaxed->records[i];
        rec["bulk_normalized_relaxed"] = rr.value_normalized;
        rec["abs_diff_relaxed"] = std::abs(rr.value_normalized - rr.qm_prediction);
      }
      records.push_back(std::move(rec));
    }
    j["records"] = std::move(records);
    j["max_abs_diff"] = max_abs_diff;
    if (relaxed) j["max_abs_diff_relaxed"] = max_abs_diff_relaxed;
    return json_document(std::move(j));
  }

  std::vector<std::string> columns = {"theta_deg", "qm_pure", "bulk_normalized", "abs_diff"};
  if (relaxed) {
    columns.push_back("bulk_normalized_relaxed");
    columns.push_back("abs_diff_relaxed");
  }
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < ideal.records.size(); ++i) {
    const ExperimentRecord& r = ideal.records[i];
    std::vector<std::string> row = {format_double(degrees[i]), format_double(r.qm_prediction),
                                    format_double(r.value_normalized),
                                    format_double(std::abs(r.value_normalized - r.qm_prediction))};
    if (relaxed) {
      const ExperimentRecord& rr = relaxed->records[i];
      row.push_back(format_double(rr.value_normalized));
      row.push_back(format_double(std::abs(rr.value_normalized - rr.qm_prediction)));
    }
    rows.push_back(std::move(row));
  }
  Echo footer;
  footer.emplace_back("max_abs_diff", format_double(max_abs_diff));
  if (relaxed) footer.emplace_back("max_abs_diff_relaxed", format_double(max_abs_diff_relaxed));
  return csv_document(echo, columns, rows, footer);
}

}  // namespace

std::string run(const Options& options) {
  if (options.format != "csv" && options.format != "json") {
    throw std::invalid_argument("format must be csv or json, got '" + options.format + "'");
  }
  if (options.command == "chsh-sweep") return run_chsh_sweep(options);
  if (options.command == "bell-eval") return run_bell_eval(options);
  if (options.command == "pps-prep") return run_pps_prep(options);
  if (options.command == "tomography") return run_tomography(options);
  if (options.command == "polarization-sweep") return run_polarization_sweep(options);
  if (options.command == "lrhvm-compare") return run_lrhvm_compare(options);
  throw std::invalid_argument("unknown command '" + options.command + "'");
}

}  // namespace bellsim::cli
