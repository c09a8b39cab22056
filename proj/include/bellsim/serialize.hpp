#pragma once

#include <string>

#include <json.hpp>

#include "bellsim/bell.hpp"
#include "bellsim/densmat.hpp"

namespace bellsim {

using json = nlohmann::ordered_json;

// Fixed 12-significant-digit rendering used for CSV cells and config echoes,
// so repeated runs stay byte-identical.
std::string format_double(double value);

// Complex matrices serialize as nested arrays of [re, im] pairs.
json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const json& j);

json density_to_json(const DensityMatrix& rho);
DensityMatrix density_from_json(const json& j);

// Inequality documents carry angles in degrees; the in-memory spec is in
// radians. Schema:
//   {
//     "num_observers": 2, "settings_per_observer": 2, "classical_bound": 2.0,
//     "directions": [{"observer":1,"setting":1,"theta_deg":0,"phi_deg":0}, ...],
//     "coefficients": [{"settings":[1,1],"c":1.0}, ...]
//   }
json inequality_spec_to_json(const InequalitySpec& spec);
InequalitySpec inequality_spec_from_json(const json& j);

double deg_to_rad(double degrees);
double rad_to_deg(double radians);

}  // namespace bellsim
