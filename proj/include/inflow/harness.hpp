#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "inflow/composite.hpp"
#include "inflow/solver.hpp"
#include "inflow/wave_curves.hpp"

namespace inflow {

enum class FitKind { power, exponential };

struct DecaySeries {
  std::vector<double> times, values;  // samples inside the window
  FitKind fit_kind = FitKind::power;
  double slope = 0, intercept = 0, r2 = 0;
  double t_lo = 0, t_hi = 0;
};

// Least squares on (log t, log y) or (t, log y) over samples with t in [t_lo, t_hi].
DecaySeries fit_decay(const std::vector<double>& t, const std::vector<double>& y, FitKind kind, double t_lo,
                      double t_hi);

std::vector<double> log_spaced(double a, double b, int n);

// Shortest decimal that reads back to the same double.
std::string format_double(double x);

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
  void row(const std::vector<double>& values);
  void row(const std::string& label, const std::vector<double>& values);

 private:
  std::ofstream out_;
};

struct RunConfig {
  Gas gas;
  std::string mode = "forward";  // forward: right_state + strengths; solve: right_state + left_state
  State right_state{0.1, 1.0, 1.0};
  std::optional<StrengthInput> strengths = StrengthInput{0.02, 0.05, 0.02, 0.05};
  std::optional<State> left_state;
  int q = 14;

  int N = 4096;
  double L = 0;  // 0: sized from the waves at t_final
  double cfl = 0.4;

  double t_final = 200;
  std::vector<double> snapshot_times{0, 50, 100, 200};
  bool deterministic = true;
  double norms_every = 2;
  BumpSpec bump;

  std::vector<std::string> suites{"bl", "contact", "rarefaction", "interactions", "sources", "stability"};
  double power_lo = 10, power_hi = 1000;
  double exp_lo = 20, exp_hi = 200;
  int samples = 24;
  double rate_tol = 0.1;        // power exponents: measured <= stated + rate_tol
  double r2_min = 0.98;         // exponential entries
  double bl_slope_tol = 0.15;   // BL tail slope
  double bl_dslope_tol = 0.2;   // BL derivative slope
  double h1_constant = 1;       // C in h1(t) <= 3 h1(0) + C delta

  void validate() const;
};

RunConfig config_from_json_text(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);
std::string config_to_json_text(const RunConfig& c);

CaseSetup make_case(const RunConfig& c, MediumSolveInfo* info = nullptr);
std::string case_to_json_text(const CaseSetup& c, const Gas& g);

struct Assertion {
  std::string suite, name, stated;
  double measured = 0;
  bool pass = false;
  bool gating = true;
};

struct SuiteReport {
  std::string suite;
  std::vector<Assertion> items;
  bool passed() const;
};

const std::vector<std::string>& suite_names();

SuiteReport run_verify(const RunConfig& c, const std::string& suite, const std::filesystem::path& out_dir);
void write_summary(const std::vector<SuiteReport>& reports, const std::filesystem::path& path);

// Stability run without assertions: norms.csv and profiles.csv.
struct SimulationResult {
  std::vector<NormsRecord> norms;
  double delta = 0;
  double max_edge_derivative = 0;
};
SimulationResult simulate(const RunConfig& c, const std::filesystem::path& out_dir);

// Common profile export: component,t,xi,V,U,Theta.
void write_waves(const RunConfig& c, double t, const std::filesystem::path& path);

// Max |FD residual - analytic source| for G and H at a few points, with 4th-order stencils of step h.
std::pair<double, double> source_oracle_error(const WaveParts& parts, double t, double h);

// L1 distance between the characteristic solution and a MUSCL finite-volume solution.
double burgers_fv_l1(const BurgersWave& bw, double T, double x_lo, double x_hi, int cells);

// L2 errors of the solver against a manufactured solution for N, 2N, 4N.
std::vector<double> manufactured_errors(const Gas& g, int N0, double t_final);

// Max deviation from a constant state after t_final with matching boundary data.
double steady_state_drift(const State& s, const Gas& g, int N, double L, double t_final);

}  // namespace inflow
