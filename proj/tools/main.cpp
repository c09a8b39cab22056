#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "cli_app.hpp"

namespace {

int write_output(const std::string& path, const std::string& document) {
  if (path == "-") {
    std::cout << document;
    return 0;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "error: validation: cannot open output file " << path << "\n";
    return 1;
  }
  out << document;
  if (!out) {
    std::cerr << "error: internal: failed writing output file " << path << "\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  bellsim::cli::Options options;
  std::string output = "-";

  CLI::App app{"Density-matrix simulator for ensemble-averaged Bell tests"};
  app.set_config("--config", "", "key=value document; command-line flags take precedence");
  app.require_subcommand(1);

  // All options live on the top level so a flat config document covers every
  // command; subcommands fall through to them.
  app.add_option("--state", options.state, "Target state: cat, zero, uniform, singlet, custom")
      ->capture_default_str();
  app.add_option("--amplitudes", options.amplitudes_file,
                 "JSON file with [re, im] amplitudes for --state custom");
  app.add_option("--epsilon", options.epsilon, "Pseudo-pure polarization in [0, 1]")
      ->capture_default_str();
  app.add_option("--theta", options.theta, "Analyzer angle grid in degrees, start:stop:step")
      ->capture_default_str();
  app.add_option("--theta-star", options.theta_star_deg,
                 "Analyzer angle (degrees) for the polarization sweep")
      ->capture_default_str();
  app.add_option("--eps", options.eps_grid, "Polarization grid, start:stop:step")
      ->capture_default_str();
  app.add_option("--t1", options.t1, "Comma-separated T1 per qubit, seconds");
  app.add_option("--t2", options.t2, "Comma-separated T2 per qubit, seconds");
  app.add_option("--duration", options.duration, "Relaxation stage duration, seconds");
  app.add_option("--shots", options.shots, "Finite-shot sample count (0 = exact only)")
      ->capture_default_str();
  app.add_option("--seed", options.seed, "Base seed for finite-shot sampling")
      ->capture_default_str();
  app.add_option("--format", options.format, "Output format: csv or json")
      ->capture_default_str();
  app.add_option("--output", output, "Output path, '-' for stdout")->capture_default_str();
  app.add_option("--spec", options.spec_file, "Inequality document (JSON) for bell-eval");
  app.add_option("--chsh-theta", options.chsh_theta_deg,
                 "Build the two-setting inequality at this angle (degrees) for bell-eval");

  const char* descriptions[][2] = {
      {"chsh-sweep", "Inequality value against analyzer angle for a prepared ensemble"},
      {"bell-eval", "Evaluate one inequality document on a prepared state"},
      {"pps-prep", "Emit a prepared pseudo-pure state and its distance to ideal"},
      {"tomography", "Measurement plan, Pauli expectations, and state reconstruction"},
      {"polarization-sweep", "Raw inequality value against polarization at a fixed angle"},
      {"lrhvm-compare", "Bulk-ensemble curve against the pure-state prediction"},
  };
  for (const auto& d : descriptions) {
    CLI::App* sub = app.add_subcommand(d[0], d[1]);
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: validation: " << e.what() << "\n";
    return 1;
  }

  try {
    options.threads = bellsim::cli::threads_from_env();
    options.command = app.get_subcommands().front()->get_name();
    const std::string document = bellsim::cli::run(options);
    return write_output(output, document);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: validation: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return 2;
  }
}
