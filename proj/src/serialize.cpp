#include "bellsim/serialize.hpp"

#include <cstdio>
#include <numbers>
#include <stdexcept>

namespace bellsim {

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) {
    throw std::invalid_argument("matrix document must be a nonempty array of rows");
  }
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  const Eigen::Index cols = static_cast<Eigen::Index>(j.front().size());
  ComplexMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw std::invalid_argument("matrix rows must all have the same length");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      const json& cell = row[static_cast<std::size_t>(c)];
      if (!cell.is_array() || cell.size() != 2 || !cell[0].is_number() || !cell[1].is_number()) {
        throw std::invalid_argument("matrix cells must be [re, im] pairs");
      }
      m(i, c) = Complex(cell[0].get<double>(), cell[1].get<double>());
    }
  }
  return m;
}

json density_to_json(const DensityMatrix& rho) {
  json j;
  j["num_qubits"] = rho.num_qubits();
  j["matrix"] = matrix_to_json(rho.matrix());
  return j;
}

DensityMatrix density_from_json(const json& j) {
  if (!j.contains("num_qubits") || !j.contains("matrix")) {
    throw std::invalid_argument("state document needs num_qubits and matrix fields");
  }
  return DensityMatrix(j["num_qubits"].get<int>(), matrix_from_json(j["matrix"]));
}

double deg_to_rad(double degrees) { return degrees * std::numbers::pi / 180.0; }

double rad_to_deg(double radians) { return radians * 180.0 / std::numbers::pi; }

json inequality_spec_to_json(const InequalitySpec& spec) {
  json j;
  j["num_observers"] = spec.num_observers;
  j["settings_per_observer"] = spec.settings_per_observer;
  j["classical_bound"] = spec.classical_bound;
  json dirs = json::array();
  for (const auto& [key, dir] : spec.directions) {
    json d;
    d["observer"] = key.first;
    d["setting"] = key.second;
    d["theta_deg"] = rad_to_deg(dir.theta);
    d["phi_deg"] = rad_to_deg(dir.phi);
    dirs.push_back(std::move(d));
  }
  j["directions"] = std::move(dirs);
  json coeffs = json::array();
  for (const auto& [settings, c] : spec.coefficients) {
    json entry;
    entry["settings"] = settings;
    entry["c"] = c;
    coeffs.push_back(std::move(entry));
  }
  j["coefficients"] = std::move(coeffs);
  return j;
}

InequalitySpec inequality_spec_from_json(const json& j) {
  for (const char* field :
       {"num_observers", "settings_per_observer", "classical_bound", "directions", "coefficients"}) {
    if (!j.contains(field)) {
      throw std::invalid_argument(std::string("inequality document missing field ") + field);
    }
  }
  InequalitySpec spec;
  spec.num_observers = j["num_observers"].get<int>();
  spec.settings_per_observer = j["settings_per_observer"].get<int>();
  spec.classical_bound = j["classical_bound"].get<double>();
  if (!j["directions"].is_array() || !j["coefficients"].is_array()) {
    throw std::invalid_argument("directions and coefficients must be arrays");
  }
  for (const json& d : j["directions"]) {
    for (const char* field : {"observer", "setting", "theta_deg", "phi_deg"}) {
      if (!d.contains(field)) {
        throw std::invalid_argument(std::string("direction entry missing field ") + field);
      }
    }
    const int observer = d["observer"].get<int>();
    const int setting = d["setting"].get<int>();
    if (spec.directions.count({observer, setting})) {
      throw std::invalid_argument("duplicate direction for observer " + std::to_string(observer) +
                                  ", setting " + std::to_string(setting));
    }
    spec.directions[{observer, setting}] = MeasurementDirection{
        deg_to_rad(d["theta_deg"].get<double>()), deg_to_rad(d["phi_deg"].get<double>())};
  }
  for (const json& entry : j["coefficients"]) {
    if (!entry.contains("settings") || !entry.contains("c")) {
      throw std::invalid_argument("coefficient entry needs settings and c fields");
    }
    const std::vector<int> settings = entry["settings"].get<std::vector<int>>();
    if (spec.coefficients.count(settings)) {
      throw std::invalid_argument("duplicate coefficient tuple");
    }
    spec.coefficients[settings] = entry["c"].get<double>();
  }
  spec.check();
  return spec;
}

}  // namespace bellsim
