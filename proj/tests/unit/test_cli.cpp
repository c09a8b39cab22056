#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "bellsim/bell.hpp"
#include "bellsim/serialize.hpp"
#include "cli_app.hpp"

using namespace bellsim;
using namespace bellsim::cli;

namespace {

// Split a CSV document into comment lines and data rows.
struct ParsedCsv {
  std::vector<std::string> comments;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

ParsedCsv parse_csv(const std::string& text) {
  ParsedCsv out;
  std::stringstream ss(text);
  std::string line;
  bool header_seen = false;
  while (std::getline(ss, line)) {
    if (line.rfind("#", 0) == 0) {
      out.comments.push_back(line);
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!header_seen) {
      out.header = cells;
      header_seen = true;
    } else {
      out.rows.push_back(cells);
    }
  }
  return out;
}

std::string comment_value(const ParsedCsv& csv, const std::string& key) {
  const std::string needle = "# " + key + " = ";
  for (const std::string& line : csv.comments) {
    if (line.rfind(needle, 0) == 0) return line.substr(needle.size());
  }
  return "";
}

std::string write_temp(const std::string& name, const std::string& content) {
  const std::string path = std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp") +
                           "/" + name;
  std::ofstream out(path);
  out << content;
  return path;
}

}  // namespace

TEST_CASE("grid specs parse inclusive ranges and bare numbers") {
  const GridSpec grid = GridSpec::parse("0:90:0.5");
  const std::vector<double> points = grid.points();
  REQUIRE(points.size() == 181);
  CHECK(points.front() == 0.0);
  CHECK(points.back() == doctest::Approx(90.0).epsilon(1e-12));

  const GridSpec single = GridSpec::parse("22.5");
  REQUIRE(single.points().size() == 1);
  CHECK(single.points().front() == 22.5);
  CHECK(single.str() == "22.5");

  CHECK(GridSpec::parse("0:1:0.25").points().size() == 5);
}

TEST_CASE("grid specs reject malformed or oversized input") {
  CHECK_THROWS_AS(GridSpec::parse("1:0:0.5"), std::invalid_argument);
  CHECK_THROWS_AS(GridSpec::parse("0:1:0"), std::invalid_argument);
  CHECK_THROWS_AS(GridSpec::parse("0:1:-1"), std::invalid_argument);
  CHECK_THROWS_AS(GridSpec::parse("0:1:0.5:2"), std::invalid_argument);
  CHECK_THROWS_AS(GridSpec::parse("abc"), std::invalid_argument);
  CHECK_THROWS_AS(GridSpec::parse("0:1e9:1").points(), std::invalid_argument);
}

TEST_CASE("thread count comes from the environment with validation") {
  unsetenv("BELLSIM_THREADS");
  CHECK(threads_from_env() == 1);
  setenv("BELLSIM_THREADS", "4", 1);
  CHECK(threads_from_env() == 4);
  setenv("BELLSIM_THREADS", "0", 1);
  CHECK_THROWS_AS(threads_from_env(), std::invalid_argument);
  setenv("BELLSIM_THREADS", "2000", 1);
  CHECK_THROWS_AS(threads_from_env(), std::invalid_argument);
  setenv("BELLSIM_THREADS", "abc", 1);
  CHECK_THROWS_AS(threads_from_env(), std::invalid_argument);
  unsetenv("BELLSIM_THREADS");
}

TEST_CASE("chsh-sweep emits the documented columns and matches the closed form") {
  Options options;
  options.command = "chsh-sweep";
  options.theta = "0:90:7.5";
  const ParsedCsv csv = parse_csv(run(options));

  CHECK(csv.header == std::vector<std::string>{"theta_deg", "chsh_normalized", "chsh_raw",
                                               "qm_prediction", "violated"});
  REQUIRE(csv.rows.size() == 13);
  CHECK(comment_value(csv, "command") == "chsh-sweep");
  CHECK(comment_value(csv, "state") == "cat");
  CHECK(comment_value(csv, "epsilon") == "1e-06");
  CHECK(comment_value(csv, "relaxation") == "none");

  for (const auto& row : csv.rows) {
    const double theta_deg = std::stod(row[0]);
    const double normalized = std::stod(row[1]);
    const double expected = chsh_qm_prediction(deg_to_rad(theta_deg));
    CHECK(std::abs(normalized - expected) < 1e-9);
    CHECK(row[4] == ((std::abs(expected) > 2.0 + 1e-6) ? "true" : "false"));
  }
}

TEST_CASE("chsh-sweep with shots appends estimate columns") {
  Options options;
  options.command = "chsh-sweep";
  options.theta = "22.5";
  options.epsilon = 1.0;
  options.shots = 20000;
  options.seed = 7;
  const ParsedCsv csv = parse_csv(run(options));
  REQUIRE(csv.header.size() == 7);
  CHECK(csv.header[5] == "chsh_estimate");
  CHECK(csv.header[6] == "chsh_std_error");
  REQUIRE(csv.rows.size() == 1);
  const double estimate = std::stod(csv.rows[0][5]);
  const double se = std::stod(csv.rows[0][6]);
  CHECK(se > 0.0);
  CHECK(std::abs(estimate - 2.0 * std::sqrt(2.0)) < 6.0 * se);
}

TEST_CASE("identical configurations produce byte-identical output") {
  Options options;
  options.command = "chsh-sweep";
  options.theta = "0:90:1";
  options.shots = 5000;
  options.format = "json";
  const std::string first = run(options);
  const std::string second = run(options);
  CHECK(first == second);

  options.seed = 999;
  CHECK(run(options) != first);
}

TEST_CASE("json output carries the config echo and parses cleanly") {
  Options options;
  options.command = "chsh-sweep";
  options.theta = "0:45:45";
  options.format = "json";
  const json doc = json::parse(run(options));
  CHECK(doc.at("command") == "chsh-sweep");
  CHECK(doc.at("config").at("state") == "cat");
  CHECK(doc.at("config").at("seed") == "12345");
  REQUIRE(doc.at("records").size() == 2);
  CHECK(doc["records"][0].contains("chsh_normalized"));
}

TEST_CASE("bell-eval needs exactly one inequality source") {
  Options options;
  options.command = "bell-eval";
  CHECK_THROWS_AS(run(options), std::invalid_argument);

  options.chsh_theta_deg = 22.5;
  options.spec_file = "/nonexistent.json";
  CHECK_THROWS_AS(run(options), std::invalid_argument);
}

TEST_CASE("bell-eval reports per-term correlations and the total") {
  Options options;
  options.command = "bell-eval";
  options.chsh_theta_deg = 22.5;
  options.epsilon = 1.0;
  const ParsedCsv csv = parse_csv(run(options));
  CHECK(csv.header == std::vector<std::string>{"setting_1", "setting_2", "coefficient",
                                               "correlation", "contribution"});
  REQUIRE(csv.rows.size() == 4);
  CHECK(comment_value(csv, "value") == format_double(2.0 * std::sqrt(2.0)));
  CHECK(comment_value(csv, "violated") == "true");
  CHECK(comment_value(csv, "classical_bound") == "2");
}

TEST_CASE("bell-eval accepts an inequality document") {
  const InequalitySpec spec = chsh_spec(deg_to_rad(22.5));
  const std::string path = write_temp("bellsim_test_spec.json", inequality_spec_to_json(spec).dump());

  Options options;
  options.command = "bell-eval";
  options.spec_file = path;
  options.epsilon = 1.0;
  options.format = "json";
  const json doc = json::parse(run(options));
  CHECK(std::abs(doc.at("value").get<double>() - 2.0 * std::sqrt(2.0)) < 1e-9);
  CHECK(doc.at("violated").get<bool>());
  REQUIRE(doc.at("terms").size() == 4);
}

TEST_CASE("pps-prep emits the matrix with a vanishing delta when noiseless") {
  Options options;
  options.command = "pps-prep";
  options.epsilon = 1e-6;
  options.format = "json";
  const json doc = json::parse(run(options));
  CHECK(doc.at("state").at("num_qubits") == 2);
  CHECK(doc.at("state").at("matrix").size() == 4);
  CHECK(doc.at("delta_vs_ideal").get<double>() < 1e-9);
  CHECK(doc.at("validity").at("positive_semidefinite").get<bool>());
}

TEST_CASE("pps-prep csv lists every matrix entry") {
  Options options;
  options.command = "pps-prep";
  options.state = "zero";
  options.epsilon = 0.5;
  const ParsedCsv csv = parse_csv(run(options));
  CHECK(csv.header == std::vector<std::string>{"row", "col", "re", "im"});
  REQUIRE(csv.rows.size() == 16);
  // (0,0) of the half-polarized |00> preparation: 0.5/4 + 0.5 = 0.625.
  CHECK(std::stod(csv.rows[0][2]) == doctest::Approx(0.625).epsilon(1e-12));
  CHECK(comment_value(csv, "delta_vs_ideal") == "0");
}

TEST_CASE("pps-prep under relaxation reports the fidelity loss") {
  Options options;
  options.command = "pps-prep";
  options.epsilon = 1.0;
  options.t1 = "5,15";
  options.t2 = "0.2,0.3";
  options.duration = 0.015;
  options.format = "json";
  const json doc = json::parse(run(options));
  const double delta = doc.at("delta_vs_ideal").get<double>();
  CHECK(delta > 0.01);
  CHECK(delta < 0.10);
}

TEST_CASE("tomography round trips the prepared state through 9 settings") {
  Options options;
  options.command = "tomography";
  options.epsilon = 0.8;
  options.format = "json";
  const json doc = json::parse(run(options));
  REQUIRE(doc.at("settings").size() == 9);
  CHECK(doc["settings"][0] == "XX");
  CHECK(doc["settings"][8] == "ZZ");
  CHECK(doc.at("expectations").size() == 16);
  CHECK(doc.at("max_abs_error_vs_input").get<double>() < 1e-10);
  CHECK(doc.at("validity").at("hermitian").get<bool>());
}

TEST_CASE("polarization-sweep reports records and the threshold") {
  Options options;
  options.command = "polarization-sweep";
  options.eps_grid = "0.05:1:0.05";
  const ParsedCsv csv = parse_csv(run(options));
  CHECK(csv.header == std::vector<std::string>{"epsilon", "chsh_raw", "chsh_normalized",
                                               "violated_raw", "lrhvm_applicable", "lrhvm_margin"});
  REQUIRE(csv.rows.size() == 20);
  const double threshold = std::stod(comment_value(csv, "threshold_epsilon"));
  CHECK(std::abs(threshold - 1.0 / std::sqrt(2.0)) < 1e-9);

  // Low-polarization rows stay inside the local-model region.
  CHECK(csv.rows[0][4] == "true");
  CHECK(csv.rows[19][4] == "false");
}

TEST_CASE("polarization-sweep without a crossing reports none") {
  Options options;
  options.command = "polarization-sweep";
  options.eps_grid = "0.05:0.3:0.05";
  options.format = "json";
  const json doc = json::parse(run(options));
  CHECK(doc.at("threshold_epsilon").is_null());
}

TEST_CASE("lrhvm-compare bounds the difference between the two pipelines") {
  Options options;
  options.command = "lrhvm-compare";
  options.theta = "0:90:5";
  const ParsedCsv csv = parse_csv(run(options));
  CHECK(csv.header ==
        std::vector<std::string>{"theta_deg", "qm_pure", "bulk_normalized", "abs_diff"});
  REQUIRE(csv.rows.size() == 19);
  CHECK(std::stod(comment_value(csv, "max_abs_diff")) < 1e-9);
}

TEST_CASE("lrhvm-compare adds relaxed columns when relaxation is configured") {
  Options options;
  options.command = "lrhvm-compare";
  options.theta = "0:90:15";
  options.t1 = "5,15";
  options.t2 = "0.2,0.3";
  options.duration = 0.015;
  options.format = "json";
  const json doc = json::parse(run(options));
  CHECK(doc.at("max_abs_diff").get<double>() < 1e-9);
  // The relaxed pipeline deviates from the pure prediction by design.
  CHECK(doc.at("max_abs_diff_relaxed").get<double>() > 0.01);
  CHECK(doc["records"][0].contains("bulk_normalized_relaxed"));
}

TEST_CASE("unknown commands, states, and formats are validation errors") {
  Options options;
  options.command = "bogus";
  CHECK_THROWS_AS(run(options), std::invalid_argument);

  options.command = "chsh-sweep";
  options.state = "w-state";
  CHECK_THROWS_AS(run(options), std::invalid_argument);

  options.state = "cat";
  options.format = "yaml";
  CHECK_THROWS_AS(run(options), std::invalid_argument);
}

TEST_CASE("custom amplitudes come from a JSON file") {
  // The singlet handed in as a custom state behaves like the built-in one.
  const double r = std::sqrt(0.5);
  const json amps = json::array({{0.0, 0.0}, {r, 0.0}, {-r, 0.0}, {0.0, 0.0}});
  const std::string path = write_temp("bellsim_test_amps.json", amps.dump());

  Options options;
  options.command = "chsh-sweep";
  options.state = "custom";
  options.amplitudes_file = path;
  options.theta = "22.5";
  options.format = "json";
  const json doc = json::parse(run(options));
  const double normalized = doc["records"][0]["chsh_normalized"].get<double>();
  CHECK(std::abs(normalized + 2.0 * std::sqrt(2.0)) < 1e-6);

  options.amplitudes_file = "/nonexistent_amps.json";
  CHECK_THROWS_AS(run(options), std::invalid_argument);
}

TEST_CASE("relaxation flags must arrive as a complete set") {
  Options options;
  options.command = "chsh-sweep";
  options.theta = "22.5";
  options.t1 = "5,15";
  CHECK_THROWS_AS(run(options), std::invalid_argument);
  options.t2 = "0.2,0.3";
  CHECK_THROWS_AS(run(options), std::invalid_argument);
  options.duration = 0.015;
  CHECK_NOTHROW(run(options));
  options.t2 = "0.2";
  CHECK_THROWS_AS(run(options), std::invalid_argument);
}
