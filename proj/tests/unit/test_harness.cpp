#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "inflow/harness.hpp"

using namespace inflow;

TEST_CASE("fit_decay examples") {
  const std::vector<double> t = log_spaced(1, 1000, 16);
  std::vector<double> y, y3;
  for (double x : t) {
    y.push_back(1 / x);
    y3.push_back(1 / x * (1 + 0.05 * std::sin(std::log(x))));
  }
  const DecaySeries p = fit_decay(t, y, FitKind::power, 1, 1000);
  CHECK(std::abs(p.slope + 1) <= 1e-10);
  CHECK(p.r2 == doctest::Approx(1).epsilon(1e-12));
  CHECK(std::abs(fit_decay(t, y3, FitKind::power, 1, 1000).slope + 1) <= 0.05);

  std::vector<double> te, ye;
  for (int i = 0; i < 20; ++i) {
    te.push_back(i);
    ye.push_back(3 * std::exp(-0.5 * i));
  }
  const DecaySeries e = fit_decay(te, ye, FitKind::exponential, 0, 19);
  CHECK(std::abs(e.slope + 0.5) <= 1e-10);
  CHECK(e.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-12));

  CHECK_THROWS_AS(fit_decay(t, y, FitKind::power, 1, 5), InsufficientData);
  std::vector<double> bad = y;
  bad[3] = 0;
  CHECK_THROWS_AS(fit_decay(t, bad, FitKind::power, 1, 1000), InsufficientData);
}

TEST_CASE("shortest round-trip formatting") {
  for (double x : {0.1, 1.0 / 3, 1e-300, 6.02214076e23, -2.5, 0.0}) CHECK(std::stod(format_double(x)) == x);
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(2) == "2");
}

TEST_CASE("config parsing") {
  const RunConfig d = config_from_json_text("{}");
  CHECK(d.N == 4096);
  CHECK(d.mode == "forward");
  CHECK(d.strengths->r1 == 0.05);
  const RunConfig r = config_from_json_text(config_to_json_text(d));
  CHECK(config_to_json_text(r) == config_to_json_text(d));

  const RunConfig s = config_from_json_text(
      R"({"case": {"mode": "solve", "left_state": [0.09, 1.1, 1.0]}, "grid": {"N": 512}})");
  CHECK(s.left_state.has_value());
  CHECK(!s.strengths.has_value());
  CHECK(s.N == 512);

  CHECK_THROWS_AS(config_from_json_text(R"({"grid": {"M": 3}})"), ConfigError);
  CHECK_THROWS_AS(config_from_json_text(R"({"case": {"mode": "solve"}})"), ConfigError);
  CHECK_THROWS_AS(config_from_json_text(R"({"case": {"left_state": [0.1, 1, 1]}})"), ConfigError);
  CHECK_THROWS_AS(config_from_json_text(R"({"grid": {"N": "many"}})"), ConfigError);
  CHECK_THROWS_AS(config_from_json_text(R"({"verify": {"suites": ["bogus"]}})"), ConfigError);
  CHECK_THROWS_AS(config_from_json_text("{"), ConfigError);
}

TEST_CASE("trivial stability run") {
  RunConfig c;
  c.strengths = StrengthInput{0, 0, 0, 0};
  c.bump.h1_size = 0;
  c.N = 256;
  c.t_final = 4;
  c.snapshot_times = {0, 4};
  const auto dir = std::filesystem::temp_directory_path() / "inflow_unit_trivial";
  const SimulationResult r = simulate(c, dir);
  // zero up to the rounding of the theta -> E -> theta conversion
  for (const auto& n : r.norms) {
    CHECK(n.sup_phi <= 1e-14);
    CHECK(n.h1 <= 1e-14);
    CHECK(n.energy <= 1e-28);
  }
  std::ifstream in(dir / "norms.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,sup_phi,sup_psi,sup_theta,l2,h1,energy");
}

TEST_CASE("summary and wave export") {
  RunConfig c;
  c.N = 128;
  const auto dir = std::filesystem::temp_directory_path() / "inflow_unit_export";
  const SuiteReport rep = run_verify(c, "contact", dir);
  write_summary({rep}, dir / "summary.csv");
  std::ifstream in(dir / "summary.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line == "suite,name,stated,measured,pass,gating");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 5);
  }
  CHECK(rows == int(rep.items.size()));

  write_waves(c, 5, dir / "waves.csv");
  std::ifstream w(dir / "waves.csv");
  std::getline(w, line);
  CHECK(line == "component,t,xi,V,U,Theta");
  CHECK_THROWS_AS(run_verify(c, "nope", dir), ConfigError);
}
