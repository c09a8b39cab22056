#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bellsim::cli {

// Inclusive "start:stop:step" grid; a bare number is a one-point grid.
struct GridSpec {
  double start = 0.0;
  double stop = 0.0;
  double step = 1.0;

  static GridSpec parse(const std::string& text);
  std::vector<double> points() const;
  std::string str() const;
};

// Resolved command configuration; defaults here are the CLI defaults.
struct Options {
  std::string command;
  std::string state = "cat";        // cat | zero | uniform | singlet | custom
  std::string amplitudes_file;      // JSON state vector, required for custom
  double epsilon = 1e-6;
  std::string theta = "0:90:0.5";   // degrees
  double theta_star_deg = 22.5;
  std::string eps_grid = "0.05:1:0.05";
  std::string t1;                   // comma-separated seconds, one per qubit
  std::string t2;
  double duration = -1.0;           // < 0 means no relaxation stage
  std::uint64_t shots = 0;          // 0 means exact expectations only
  std::uint64_t seed = 12345;
  std::string format = "csv";       // csv | json
  std::string spec_file;            // inequality document for bell-eval
  double chsh_theta_deg = 1e300;    // bell-eval shortcut; sentinel = unset
  int threads = 1;

  bool relaxation_requested() const;
};

// Execute the configured command and return the output document.
// Throws std::invalid_argument for configuration/input errors.
std::string run(const Options& options);

// Thread count from BELLSIM_THREADS (default 1); rejects garbage values.
int threads_from_env();

}  // namespace bellsim::cli
